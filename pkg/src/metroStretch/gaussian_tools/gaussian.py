# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
import warnings
from typing import Sequence, Union

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

# hbar = 1, vacuum quadrature variance 1/2, quadratures ordered (x1, p1, x2, p2, ...)
VACUUM_VAR = 0.5
CM_TOL = 1e-10
SYM_TOL = 1e-12
CHANNEL_TOL = 1e-10
FID_TOL = 1e-10

Z2 = np.diag([1.0, -1.0])
I2 = np.eye(2)

gaussian_channel_kinds = ['thermal_loss', 'amplifier', 'additive', 'identity']


def symplectic_form(modes: int) -> np.ndarray:
    """Omega = direct sum of [[0, 1], [-1, 0]] over the modes."""
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(cm) -> np.ndarray:
    """
    Symplectic eigenvalues of a covariance matrix, sorted increasingly.
    Pure states have all symplectic eigenvalues equal to 1/2.
    """
    cm = np.asarray(cm, dtype=float)
    modes = cm.shape[0] // 2
    vals = np.abs(np.linalg.eigvals(1j * symplectic_form(modes) @ cm))
    return np.sort(vals)[::2]


def _kind(kind: str) -> str:
    return kind.replace('-', '_').lower()


class GaussianState:
    """
    Gaussian state of m bosonic modes, described by its first and second moments.

    Attributes:
        modes (int): number of modes m.
        mean (np.ndarray): length-2m real mean vector (read-only).
        cm (np.ndarray): 2m x 2m real covariance matrix (read-only).
    """

    def __init__(self, cm, mean=None, validate: bool = True, tol: float = CM_TOL):
        """
        Initialize a Gaussian state.

        Args:
            cm (array-like): covariance matrix V.
            mean (array-like): mean vector. Default zero.
            validate (bool): check symmetry and the uncertainty principle. Default True.
            tol (float): tolerance on V + i Omega / 2 >= 0. Default 1e-10.
        """
        cm = np.array(cm, dtype=float)
        if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] % 2:
            raise ValueError(f"Covariance matrix must be square with even dimension, got shape {cm.shape}")
        self.modes = cm.shape[0] // 2
        mean = np.zeros(2 * self.modes) if mean is None else np.array(mean, dtype=float).reshape(-1)
        if mean.shape != (2 * self.modes,):
            raise ValueError(f"Mean vector of length {mean.size} does not match {self.modes} modes")

        cm.setflags(write=False)
        mean.setflags(write=False)
        self.cm = cm
        self.mean = mean

        if validate:
            self.validate(tol=tol)

    def __str__(self):
        return f"metroStretch.GaussianState(modes={self.modes}):\nmean\t: {np.round(self.mean, 6)}\ncm\t:\n{np.round(self.cm, 6)}"

    __repr__ = __str__

    def validate(self, tol: float = CM_TOL):
        """
        Raise a ValueError if the moments do not describe a physical state.
        """
        scale = max(1.0, np.max(np.abs(self.cm)))
        sym_err = np.max(np.abs(self.cm - self.cm.T))
        if sym_err > SYM_TOL * scale:
            raise ValueError(f"Covariance matrix is not symmetric (max deviation {sym_err:.3e})")
        min_eig = np.min(np.linalg.eigvalsh(self.cm + 0.5j * symplectic_form(self.modes)))
        if min_eig < -tol * scale:
            raise ValueError(f"Covariance matrix violates the uncertainty principle (min eigenvalue of V + i Omega/2 is {min_eig:.3e})")

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.cm)

    def purity(self) -> float:
        """Tr(rho^2) = 1 / sqrt(det(2V))."""
        return float(1.0 / np.sqrt(np.linalg.det(2.0 * self.cm)))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.symplectic_eigenvalues() - VACUUM_VAR) < tol))

    def mean_photon_number(self) -> float:
        """Total mean photon number (Tr V + |mean|^2 - m) / 2."""
        return float(0.5 * (np.trace(self.cm) + self.mean @ self.mean - self.modes))

    def reduce(self, modes: Union[int, Sequence[int]]) -> "GaussianState":
        """
        Reduced state on a subset of modes (0-based labels, kept in the given order).
        """
        if isinstance(modes, (int, np.integer)):
            modes = [int(modes)]
        if any(k < 0 or k >= self.modes for k in modes):
            raise ValueError(f"Mode labels {list(modes)} out of range for {self.modes} modes")
        idx = np.ravel([[2 * k, 2 * k + 1] for k in modes])
        return GaussianState(self.cm[np.ix_(idx, idx)], self.mean[idx], validate=False)


def vacuum(modes: int = 1) -> GaussianState:
    return GaussianState(VACUUM_VAR * np.eye(2 * modes))


def thermal(nbar: float) -> GaussianState:
    """Single-mode thermal state with V = (nbar + 1/2) I."""
    if nbar < 0:
        raise ValueError(f"Thermal photon number must be non-negative, got {nbar}")
    return GaussianState((nbar + VACUUM_VAR) * I2)


def coherent(alpha: complex) -> GaussianState:
    """Coherent state |alpha>, mean sqrt(2) (Re alpha, Im alpha) and vacuum noise."""
    alpha = complex(alpha)
    return GaussianState(VACUUM_VAR * I2, np.sqrt(2) * np.array([alpha.real, alpha.imag]))


def displace(state: GaussianState, alpha: complex, mode: int = 0) -> GaussianState:
    """Shift the mean of one mode by sqrt(2) (Re alpha, Im alpha)."""
    if not 0 <= mode < state.modes:
        raise ValueError(f"Mode index {mode} out of range for a {state.modes}-mode state")
    alpha = complex(alpha)
    mean = np.array(state.mean)
    mean[2 * mode:2 * mode + 2] += np.sqrt(2) * np.array([alpha.real, alpha.imag])
    return GaussianState(state.cm, mean, validate=False)


def join_states(*states: GaussianState) -> GaussianState:
    """Product state of several Gaussian states, modes in the given order."""
    if not states:
        raise ValueError("Nothing to join")
    cm = scipy.linalg.block_diag(*[s.cm for s in states])
    mean = np.concatenate([s.mean for s in states])
    return GaussianState(cm, mean, validate=False)


def tmsv(r: float) -> GaussianState:
    """
    Two-mode squeezed vacuum with squeezing r: A = B = cosh(2r)/2 I, C = sinh(2r)/2 Z.
    Each reduced mode is thermal with mean photon number sinh(r)^2.

    Example:
        tmsv(np.log(2) / 2).cm[0, 0] -> 0.625
    """
    if r < 0:
        raise ValueError(f"Squeezing must be non-negative, got {r}")
    ch, sh = np.cosh(2 * r) / 2, np.sinh(2 * r) / 2
    return GaussianState(np.block([[ch * I2, sh * Z2], [sh * Z2, ch * I2]]))


class GaussianChannel:
    """
    Single-mode Gaussian channel acting on the moments as
    mean -> T mean + d, V -> T V T^T + N.

    Attributes:
        T (np.ndarray): 2 x 2 real matrix.
        N (np.ndarray): 2 x 2 real symmetric noise matrix.
        d (np.ndarray): length-2 displacement.
        kind (str): 'thermal_loss', 'amplifier', 'additive' or 'custom'.
        params (dict): defining parameters, e.g. {'eta': 0.5, 'nbar': 1}.
        valid (bool): whether N >= 0 and det N >= (det T - 1)^2 / 4 hold.
    """

    def __init__(self, T, N, d=None, kind: str = 'custom', params: dict = None, validate: bool = True, tol: float = CHANNEL_TOL):
        T = np.array(T, dtype=float)
        N = np.array(N, dtype=float)
        d = np.zeros(2) if d is None else np.array(d, dtype=float).reshape(-1)
        if T.shape != (2, 2) or N.shape != (2, 2) or d.shape != (2,):
            raise ValueError(f"Single-mode channel needs 2x2 T and N and a length-2 d, got {T.shape}, {N.shape}, {d.shape}")
        for m in (T, N, d):
            m.setflags(write=False)
        self.T, self.N, self.d = T, N, d
        self.kind = kind
        self.params = {} if params is None else dict(params)
        self.valid = is_valid_channel(T, N, tol=tol)

        if validate and not self.valid:
            raise ValueError(f"(T, N) does not define a physical channel: det N = {np.linalg.det(N):.6g}, "
                             f"(det T - 1)^2 / 4 = {(np.linalg.det(T) - 1) ** 2 / 4:.6g}")

    def __str__(self):
        return (f"metroStretch.GaussianChannel():\n____________________\nkind\t: {self.kind}\nparams\t: {self.params}\n"
                f"T\t:\n{np.round(self.T, 6)}\nN\t:\n{np.round(self.N, 6)}\n")

    __repr__ = __str__

    def __call__(self, state: GaussianState, mode: int = 0) -> GaussianState:
        return apply_gaussian(self, state, mode=mode)


def is_valid_channel(T, N, tol: float = CHANNEL_TOL) -> bool:
    """
    N = N^T >= 0 and det N >= (det T - 1)^2 / 4, up to tol.
    """
    T, N = np.asarray(T, dtype=float), np.asarray(N, dtype=float)
    if np.max(np.abs(N - N.T)) > tol:
        return False
    if np.min(np.linalg.eigvalsh(0.5 * (N + N.T))) < -tol:
        return False
    return bool(np.linalg.det(N) >= (np.linalg.det(T) - 1) ** 2 / 4 - tol)


def make_gaussian_channel(kind: str, eta: float = None, nbar: float = 0.0, nu: float = None) -> GaussianChannel:
    """
    Phase-insensitive Gaussian channel T = sqrt(eta) I, N = nu I.

    thermal_loss:  eta in [0, 1], nu = (1 - eta)(nbar + 1/2)
    amplifier:     eta > 1,       nu = (eta - 1)(nbar + 1/2)
    additive:      eta = 1,       nu >= 0
    identity:      eta = 1,       nu = 0

    Args:
        kind (str): channel family, hyphens and underscores are equivalent.
        eta (float): transmissivity or gain.
        nbar (float): thermal photon number of the environment. Default 0.
        nu (float): added noise of the additive channel.

    Returns:
        GaussianChannel: the channel.

    Example:
        make_gaussian_channel('thermal_loss', eta=0.5, nbar=1).N -> 0.75 I
    """
    kind = _kind(kind)
    if kind in ('thermal_loss', 'amplifier'):
        if eta is None:
            raise ValueError(f"Channel '{kind}' requires eta")
        if nbar < 0:
            raise ValueError(f"Thermal photon number must be non-negative, got {nbar}")
        if kind == 'thermal_loss' and not 0 <= eta <= 1:
            raise ValueError(f"Thermal-loss transmissivity must lie in [0, 1], got {eta}")
        if kind == 'amplifier' and not eta > 1:
            raise ValueError(f"Amplifier gain must be larger than 1, got {eta}")
        noise = abs(1 - eta) * (nbar + VACUUM_VAR)
        params = {'eta': eta, 'nbar': nbar}
    elif kind == 'additive':
        if nu is None or nu < 0:
            raise ValueError(f"Additive noise must be non-negative, got {nu}")
        eta, noise = 1.0, nu
        params = {'nu': nu}
    elif kind == 'identity':
        eta, noise, params = 1.0, 0.0, {}
    else:
        raise ValueError(f"Unknown Gaussian channel kind '{kind}', choose from {gaussian_channel_kinds}")

    return GaussianChannel(np.sqrt(eta) * I2, noise * I2, kind=kind, params=params)


def apply_gaussian(ch: GaussianChannel, state: GaussianState, mode: int = 0) -> GaussianState:
    """
    Apply a single-mode channel to one mode of a (multimode) state, identity elsewhere.

    Args:
        ch (GaussianChannel): the channel.
        state (GaussianState): input state.
        mode (int): 0-based mode the channel acts on. Default 0.

    Returns:
        GaussianState: output state.
    """
    if not 0 <= mode < state.modes:
        raise ValueError(f"Mode index {mode} out of range for a {state.modes}-mode state")
    dim = 2 * state.modes
    T = np.eye(dim)
    N = np.zeros((dim, dim))
    d = np.zeros(dim)
    sl = slice(2 * mode, 2 * mode + 2)
    T[sl, sl] = ch.T
    N[sl, sl] = ch.N
    d[sl] = ch.d

    cm = T @ state.cm @ T.T + N
    return GaussianState(0.5 * (cm + cm.T), T @ state.mean + d)


def choi_cm(ch: GaussianChannel, r: float) -> GaussianState:
    """
    Finite-energy Choi state (E x I)(tmsv(r)): the channel acts on mode 0.
    """
    return apply_gaussian(ch, tmsv(r), mode=0)


class ResourceCM:
    """
    Zero-mean two-mode resource state with CM [[A, C], [C^T, B]]. Mode A is the
    one Bell-detected with the input, mode B is the output of the teleportation.

    Attributes:
        A, B (np.ndarray): 2 x 2 symmetric blocks.
        C (np.ndarray): 2 x 2 correlation block.
        r (float): squeezing parameter, when the resource is built from one.
        params (dict): defining parameters of the resource.
    """

    def __init__(self, A, B, C, r: float = None, params: dict = None, validate: bool = True):
        self.A = np.array(A, dtype=float)
        self.B = np.array(B, dtype=float)
        self.C = np.array(C, dtype=float)
        for m in (self.A, self.B, self.C):
            if m.shape != (2, 2):
                raise ValueError(f"Resource blocks must be 2x2, got {m.shape}")
            m.setflags(write=False)
        self.r = r
        self.params = {} if params is None else dict(params)
        if validate:
            self.to_state()

    @property
    def cm(self) -> np.ndarray:
        return np.block([[self.A, self.C], [self.C.T, self.B]])

    def to_state(self) -> GaussianState:
        return GaussianState(self.cm)

    @classmethod
    def from_state(cls, state: GaussianState) -> "ResourceCM":
        if state.modes != 2:
            raise ValueError(f"A resource is a two-mode state, got {state.modes} modes")
        cm = state.cm
        return cls(cm[:2, :2], cm[2:, 2:], cm[:2, 2:])

    def __str__(self):
        return f"metroStretch.ResourceCM(r={self.r}, params={self.params}):\n{np.round(self.cm, 6)}"

    __repr__ = __str__


def bk_teleport_channel(res: Union[ResourceCM, GaussianState], g: float = 1.0) -> GaussianChannel:
    """
    Braunstein-Kimble teleportation with gain g over a two-mode resource.
    The resulting channel is T = g I, N = g^2 Z A Z + B - g (Z C + C^T Z), d = 0.

    A resource that does not produce a physical channel is not an error: the
    returned channel has valid=False and a warning is emitted.

    Args:
        res (ResourceCM or GaussianState): the resource.
        g (float): gain, g >= 0. Default 1.

    Returns:
        GaussianChannel: the teleportation channel.
    """
    if isinstance(res, GaussianState):
        res = ResourceCM.from_state(res)
    if g < 0:
        raise ValueError(f"Teleportation gain must be non-negative, got {g}")

    N = g ** 2 * Z2 @ res.A @ Z2 + res.B - g * (Z2 @ res.C + res.C.T @ Z2)
    ch = GaussianChannel(g * I2, 0.5 * (N + N.T), kind='custom', params={'g': g}, validate=False)
    if not ch.valid:
        warnings.warn(f"Teleportation over this resource with gain {g} does not give a physical channel")
    return ch


def finite_resource(eta: float, nu: float) -> ResourceCM:
    """
    Finite-energy resource sigma_nu whose BK teleportation with gain sqrt(eta)
    is exactly the phase-insensitive channel (sqrt(eta) I, nu I).

    Blocks A = a I, B = b I, C = c Z with
        a = cosh(2r) / 2
        b = |1 - eta| / 2 + eta cosh(2r) / 2
        c = sqrt(eta) sinh(2r) / 2
        r = -ln[(2 nu - |1 - eta|) / (2 eta)] / 2
    so that nu = a eta - 2 c sqrt(eta) + b. A negative r is a valid resource.

    Args:
        eta (float): transmissivity or gain, eta > 0.
        nu (float): added noise, nu > |1 - eta| / 2.

    Returns:
        ResourceCM: the resource, with r and (eta, nu) attached.

    Example:
        finite_resource(1.0, 0.5) -> a = b = 0.625, c = 0.375, r = ln(2)/2
    """
    if not eta > 0:
        raise ValueError(f"Resource transmissivity must be positive, got {eta}")
    excess = 2 * nu - abs(1 - eta)
    if not excess > 0:
        raise ValueError(f"Noise nu={nu} is at or below the quantum-limited value |1 - eta|/2 = {abs(1 - eta) / 2}, "
                         "the resource would need infinite squeezing")
    r = -0.5 * np.log(excess / (2 * eta))
    a = np.cosh(2 * r) / 2
    b = abs(1 - eta) / 2 + eta * np.cosh(2 * r) / 2
    c = np.sqrt(eta) * np.sinh(2 * r) / 2
    logger.debug(f"finite resource eta={eta}, nu={nu}: r={r:.6f}")
    return ResourceCM(a * I2, b * I2, c * Z2, r=r, params={'eta': eta, 'nu': nu})


def gaussian_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """
    Uhlmann fidelity F = Tr sqrt(sqrt(s2) s1 sqrt(s2)) of two Gaussian states.

    If either state is pure, F^2 = Tr(s1 s2) = exp(-delta^T (V1 + V2)^-1 delta / 2) / sqrt(det(V1 + V2)).
    Otherwise the closed multimode formula with the auxiliary matrix
    V_aux = Omega^T (V1 + V2)^-1 (Omega / 4 + V2 Omega V1) is used.

    Args:
        s1, s2 (GaussianState): states with the same number of modes.

    Returns:
        float: fidelity in [0, 1].

    Example:
        gaussian_fidelity(vacuum(), thermal(1)) -> 0.70710678...
    """
    if s1.modes != s2.modes:
        raise ValueError(f"States have different numbers of modes: {s1.modes} vs {s2.modes}")
    if np.array_equal(s1.cm, s2.cm) and np.array_equal(s1.mean, s2.mean):
        return 1.0

    v1, v2 = s1.cm, s2.cm
    vsum = v1 + v2
    delta = s2.mean - s1.mean
    vsum_inv = np.linalg.inv(vsum)
    displacement = np.exp(-0.5 * delta @ vsum_inv @ delta)

    if s1.is_pure() or s2.is_pure():
        fid2 = displacement / np.sqrt(np.linalg.det(vsum))
    else:
        J = symplectic_form(s1.modes)
        v_aux = J.T @ vsum_inv @ (J / 4 + v2 @ J @ v1)
        W = -2 * v_aux @ (1j * J)
        # det(sqrt(I - W^-2) + I) from the spectrum of W; a pure symplectic mode in
        # either state puts an eigenvalue of I - W^-2 at zero
        terms = 1.0 - 1.0 / np.linalg.eigvals(W) ** 2
        terms[np.abs(terms) < FID_TOL] = 0.0
        top = np.real(np.prod(1.0 + np.sqrt(terms))) * np.linalg.det(-2 * v_aux)
        fid2 = np.sqrt(max(top, 0.0) / np.linalg.det(vsum)) * displacement

    return float(np.sqrt(np.clip(np.real(fid2), 0.0, 1.0)))
