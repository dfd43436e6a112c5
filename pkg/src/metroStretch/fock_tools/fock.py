# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import List

import numpy as np
import scipy.linalg
from scipy.special import eval_genlaguerre, gammainc, gammaln

from metroStretch.linalg_tools import partial_trace, uhlmann_fidelity

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 40
MIN_CUTOFF = 4
TAIL_BUDGET = 1e-6
MAX_TAIL = 1e-4
UNITARY_TOL = 1e-10

fock_kinds = ['vacuum', 'coherent', 'thermal', 'displaced_thermal', 'tmsv']


class FockState:
    """
    State of one or two bosonic modes truncated to photon numbers below the cutoff.

    Attributes:
        cutoff (int): number of kept Fock levels per mode.
        modes (int): 1 or 2; two-mode index is n_A * cutoff + n_B.
        data (np.ndarray): truncated density matrix, trace = 1 - tail.
        tail (float): probability mass outside the truncated space.
        ket (np.ndarray): truncated state vector for pure states, else None.
    """

    def __init__(self, data: np.ndarray = None, cutoff: int = DEFAULT_CUTOFF, modes: int = 1, tail: float = 0.0, ket: np.ndarray = None):
        if modes not in (1, 2):
            raise ValueError(f"Fock states of 1 or 2 modes are supported, got {modes}")
        dim = cutoff ** modes
        if ket is not None:
            ket = np.asarray(ket, dtype=complex).reshape(-1)
            if ket.size != dim:
                raise ValueError(f"State vector of length {ket.size} does not match cutoff {cutoff} and {modes} modes")
            ket.setflags(write=False)
        self.ket = ket
        self._data = None if data is None else np.asarray(data, dtype=complex)
        if self._data is None and ket is None:
            raise ValueError("A Fock state needs a density matrix or a state vector")
        if self._data is not None and self._data.shape != (dim, dim):
            raise ValueError(f"Density matrix of shape {self._data.shape} does not match cutoff {cutoff} and {modes} modes")
        self.cutoff = cutoff
        self.modes = modes
        self.tail = float(tail)

    @property
    def data(self) -> np.ndarray:
        if self._data is None:
            self._data = np.outer(self.ket, self.ket.conj())
        return self._data

    def trace(self) -> float:
        if self.ket is not None:
            return float(np.real(self.ket.conj() @ self.ket))
        return float(np.real(np.trace(self._data)))

    def __str__(self):
        return f"metroStretch.FockState(modes={self.modes}, cutoff={self.cutoff}, tail={self.tail:.3e}, pure={self.ket is not None})"

    __repr__ = __str__


def _check_cutoff(cutoff: int):
    if cutoff < MIN_CUTOFF:
        raise ValueError(f"Cutoff must be at least {MIN_CUTOFF}, got {cutoff}")


def _check_tail(tail: float, kind: str, cutoff: int, limit: float = MAX_TAIL):
    if tail > limit:
        raise ValueError(f"Truncation tail {tail:.3e} of {kind} exceeds {limit:.0e} at cutoff {cutoff}, raise the cutoff")


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n < cutoff."""
    n = np.arange(cutoff)
    alpha = complex(alpha)
    return np.exp(-abs(alpha) ** 2 / 2 - 0.5 * gammaln(n + 1)) * alpha ** n


def displacement_matrix(alpha: complex, rows: int, cols: int = None) -> np.ndarray:
    """
    Matrix elements <m|D(alpha)|n> from the generalized Laguerre closed form.
    """
    cols = rows if cols is None else cols
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    out = np.zeros((rows, cols), dtype=complex)
    for m in range(rows):
        for n in range(cols):
            lo, hi = min(m, n), max(m, n)
            amp = alpha if m >= n else -alpha.conjugate()
            pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - x / 2)
            out[m, n] = pref * amp ** (hi - lo) * eval_genlaguerre(lo, hi - lo, x)
    return out


def thermal_probabilities(nbar: float, cutoff: int) -> np.ndarray:
    """p_n = nbar^n / (nbar + 1)^(n + 1)."""
    n = np.arange(cutoff)
    return (1.0 / (nbar + 1.0)) * (nbar / (nbar + 1.0)) ** n


def fock_state(kind: str, cutoff: int = DEFAULT_CUTOFF, alpha: complex = 0.0, nbar: float = 0.0, r: float = 0.0) -> FockState:
    """
    Truncated Fock representation of a Gaussian state.

    vacuum, coherent(alpha), thermal(nbar), displaced_thermal(alpha, nbar)
    are single-mode; tmsv(r) is the two-mode state sqrt(1 - l^2) sum l^n |nn>,
    l = tanh r.

    Args:
        kind (str): state family.
        cutoff (int): Fock levels per mode, >= 4. Default 40.
        alpha (complex): coherent amplitude.
        nbar (float): thermal photon number.
        r (float): two-mode squeezing.

    Returns:
        FockState: the truncated state, tail reported.

    Example:
        fock_state('thermal', nbar=1).data[0, 0] -> 0.5
    """
    _check_cutoff(cutoff)
    if nbar < 0:
        raise ValueError(f"Thermal photon number must be non-negative, got {nbar}")

    if kind == 'vacuum':
        ket = np.zeros(cutoff, dtype=complex)
        ket[0] = 1.0
        return FockState(cutoff=cutoff, ket=ket)

    if kind == 'coherent':
        tail = float(gammainc(cutoff, abs(complex(alpha)) ** 2)) if alpha != 0 else 0.0
        _check_tail(tail, kind, cutoff)
        return FockState(cutoff=cutoff, tail=tail, ket=coherent_amplitudes(alpha, cutoff))

    if kind == 'thermal':
        tail = (nbar / (nbar + 1.0)) ** cutoff
        _check_tail(tail, kind, cutoff)
        return FockState(np.diag(thermal_probabilities(nbar, cutoff)).astype(complex), cutoff=cutoff, tail=tail)

    if kind == 'displaced_thermal':
        inner = 2 * cutoff
        D = displacement_matrix(alpha, cutoff, inner)
        data = (D * thermal_probabilities(nbar, inner)) @ D.conj().T
        tail = max(1.0 - float(np.real(np.trace(data))), 0.0)
        _check_tail(tail, kind, cutoff)
        return FockState(data, cutoff=cutoff, tail=tail)

    if kind == 'tmsv':
        if r < 0:
            raise ValueError(f"Squeezing must be non-negative, got {r}")
        lam = np.tanh(r)
        ket = np.zeros(cutoff * cutoff, dtype=complex)
        n = np.arange(cutoff)
        ket[n * cutoff + n] = np.sqrt(1 - lam ** 2) * lam ** n
        tail = lam ** (2 * cutoff)
        _check_tail(tail, kind, cutoff)
        return FockState(cutoff=cutoff, modes=2, tail=tail, ket=ket)

    raise ValueError(f"Unknown Fock state kind '{kind}', choose from {fock_kinds}")


def fock_product(a: FockState, b: FockState) -> FockState:
    """Two-mode product state a x b."""
    if a.modes != 1 or b.modes != 1 or a.cutoff != b.cutoff:
        raise ValueError("Products are built from single-mode states with equal cutoffs")
    tail = 1.0 - (1.0 - a.tail) * (1.0 - b.tail)
    if a.ket is not None and b.ket is not None:
        return FockState(cutoff=a.cutoff, modes=2, tail=tail, ket=np.kron(a.ket, b.ket))
    return FockState(np.kron(a.data, b.data), cutoff=a.cutoff, modes=2, tail=tail)


def _sector_indices(cutoff: int) -> List[np.ndarray]:
    # product-basis indices of |k, N - k>, k = 0..N, for every complete sector N < cutoff
    return [np.array([k * cutoff + (N - k) for k in range(N + 1)]) for N in range(cutoff)]


def beam_splitter_blocks(eta: float, cutoff: int) -> List[np.ndarray]:
    """
    Beam splitter of transmissivity eta, exp[theta (a^dagger b - a b^dagger)]
    with cos(theta) = sqrt(eta), restricted to each total-photon sector
    N < cutoff in the basis |k, N - k>, k = 0..N.

    Returns:
        list: block N is an (N + 1) x (N + 1) real orthogonal matrix.
    """
    if not 0 <= eta <= 1:
        raise ValueError(f"Transmissivity must lie in [0, 1], got {eta}")
    theta = np.arccos(np.sqrt(eta))
    blocks = []
    for N in range(cutoff):
        gen = np.zeros((N + 1, N + 1))
        for k in range(N):
            # a^dagger b |k, N-k> = sqrt(k+1) sqrt(N-k) |k+1, N-k-1>
            amp = np.sqrt(k + 1) * np.sqrt(N - k)
            gen[k + 1, k] += amp
            gen[k, k + 1] -= amp
        blocks.append(scipy.linalg.expm(theta * gen))
    return blocks


def fock_thermal_loss(eta: float, nbar: float, rho: FockState, tail_budget: float = TAIL_BUDGET) -> FockState:
    """
    Thermal-loss channel in the truncated Fock basis: mode 0 of the input is
    mixed with a thermal environment on a beam splitter of transmissivity eta
    and the environment is traced out. A second mode is an untouched ancilla,
    so a two-mode TMSV input gives the lossy Choi state (output, ancilla).

    Args:
        eta (float): transmissivity in [0, 1].
        nbar (float): environment photon number.
        rho (FockState): one- or two-mode input.
        tail_budget (float): largest accepted trace loss. Default 1e-6.

    Returns:
        FockState: the output state, with the modes of the input.
    """
    c = rho.cutoff
    env = fock_state('thermal', cutoff=c, nbar=nbar).data

    # beam splitter on (input, environment); photons beyond the complete sectors are dropped
    idx = np.concatenate(_sector_indices(c))
    U = np.zeros((c * c, c * c))
    U[np.ix_(idx, idx)] = scipy.linalg.block_diag(*beam_splitter_blocks(eta, c))
    U4 = U.reshape(c, c, c, c)

    if rho.modes == 1:
        out = np.einsum('aepq,ps,qt,xest->ax', U4, rho.data, env, U4, optimize=True)
    else:
        rho4 = rho.data.reshape(c, c, c, c)
        out = np.einsum('aepq,pbsy,qt,xest->abxy', U4, rho4, env, U4, optimize=True).reshape(c * c, c * c)

    tail = max(1.0 - float(np.real(np.trace(out))), 0.0)
    logger.debug(f"Fock thermal loss eta={eta}, nbar={nbar} on {rho.modes} mode(s): truncation tail {tail:.3e}")
    _check_tail(tail, 'thermal-loss output', c, limit=tail_budget)
    return FockState(out, cutoff=c, modes=rho.modes, tail=tail)


def oracle_fidelity(a: FockState, b: FockState) -> float:
    """
    Uhlmann fidelity of two truncated states, accurate to O(tail). Pure
    states use the overlap form sqrt(<psi|sigma|psi>).
    """
    if a.cutoff != b.cutoff or a.modes != b.modes:
        raise ValueError(f"States differ in cutoff or modes: ({a.cutoff}, {a.modes}) vs ({b.cutoff}, {b.modes})")
    if a.ket is not None and b.ket is not None:
        return float(min(abs(a.ket.conj() @ b.ket), 1.0))
    if a.ket is not None or b.ket is not None:
        pure, mixed = (a, b) if a.ket is not None else (b, a)
        overlap = np.real(pure.ket.conj() @ mixed.data @ pure.ket)
        return float(np.sqrt(np.clip(overlap, 0.0, 1.0)))
    return uhlmann_fidelity(a.data, b.data)


def mean_photon_number(state: FockState, mode: int = 0) -> float:
    """Mean photon number of one mode of a truncated state."""
    if not 0 <= mode < state.modes:
        raise ValueError(f"Mode index {mode} out of range for a {state.modes}-mode state")
    data = state.data
    if state.modes == 2:
        data = partial_trace(data, [state.cutoff, state.cutoff], keep=[mode])
    return float(np.real(np.arange(state.cutoff) @ np.diag(data)))
