# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import Iterable, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

# eigenvalues in [-PSD_TOL, 0) are clamped to zero, anything below raises
PSD_TOL = 1e-12
STATE_TOL = 1e-10


class DensityMatrix:
    """
    A finite-dimensional quantum state, stored as a Hermitian, positive
    semi-definite, unit-trace complex matrix.

    Attributes:
        data (np.ndarray): dim x dim complex matrix (read-only).
        dim (int): Hilbert-space dimension.
    """

    def __init__(self, data, validate: bool = True, tol: float = STATE_TOL):
        """
        Initialize a density matrix.

        Args:
            data (array-like or DensityMatrix): square complex matrix.
            validate (bool): check hermiticity, positivity and trace. Default True.
            tol (float): tolerance used by the validation. Default 1e-10.
        """
        data = np.array(as_matrix(data), dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"A density matrix must be square, got shape {data.shape}")
        data.setflags(write=False)
        self.data = data
        self.dim = data.shape[0]

        if validate:
            self.validate(tol=tol)

    def __str__(self):
        return f"metroStretch.DensityMatrix(dim={self.dim}):\n{np.round(self.data, 6)}"

    __repr__ = __str__

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    def validate(self, tol: float = STATE_TOL):
        """
        Raise a ValueError if the matrix is not a valid quantum state.

        Args:
            tol (float): tolerance on hermiticity, eigenvalues and trace.
        """
        herm_err = np.max(np.abs(self.data - self.data.conj().T))
        if herm_err > tol:
            raise ValueError(f"Matrix is not Hermitian (max deviation {herm_err:.3e})")
        trace = np.real(np.trace(self.data))
        if abs(trace - 1.0) > tol:
            raise ValueError(f"Matrix trace is {trace:.12f}, expected 1")
        min_eig = np.min(np.linalg.eigvalsh(hermitize(self.data)))
        if min_eig < -tol:
            raise ValueError(f"Matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})")

    def purity(self) -> float:
        """Return Tr(rho^2)."""
        return float(np.real(np.trace(self.data @ self.data)))


def as_matrix(m) -> np.ndarray:
    """
    Return the underlying numpy array of a DensityMatrix, or the input as array.
    """
    if isinstance(m, DensityMatrix):
        return m.data
    arr = np.asarray(m)
    if not np.issubdtype(arr.dtype, np.number):
        raise TypeError(f"Expected a numeric matrix or DensityMatrix, got {type(m).__name__}")
    return arr


def hermitize(m) -> np.ndarray:
    """Return the Hermitian part (M + M^dagger)/2."""
    m = as_matrix(m)
    return 0.5 * (m + m.conj().T)


def ket_to_dm(psi) -> DensityMatrix:
    """
    Projector |psi><psi| of a (normalized) state vector.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("Cannot build a state from the zero vector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()))


def basis_projector(dim: int, index: int) -> np.ndarray:
    """Return |index><index| in dimension dim."""
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return m


def tensor(a, b, *more) -> np.ndarray:
    """
    Kronecker product of two (or more) square matrices.

    Args:
        a, b (DensityMatrix or array-like): square operands.

    Returns:
        np.ndarray: matrix of dimension dim(a) * dim(b) * ...

    Example:
        tensor(np.eye(2), np.eye(2)) -> np.eye(4)
    """
    out = as_matrix(a)
    for m in (b,) + more:
        m = as_matrix(m)
        for x in (out, m):
            if x.ndim != 2 or x.shape[0] != x.shape[1]:
                raise ValueError(f"tensor expects square matrices, got shape {x.shape}")
        out = np.kron(out, m)
    return out


def partial_trace(m, dims: Sequence[int], keep: Union[int, Iterable[int]]) -> np.ndarray:
    """
    Reduced matrix on the kept subsystems.

    Subsystems are labelled from 0 in the order of `dims`; the kept subsystems
    appear in the output in increasing label order.

    Args:
        m (DensityMatrix or array-like): operator on the composite space.
        dims (list of int): subsystem dimensions, their product must equal dim(m).
        keep (int or iterable of int): labels of the subsystems to keep.

    Returns:
        np.ndarray: the reduced operator.

    Example:
        partial_trace(tensor(rho, sigma), [2, 2], keep=[0]) -> rho
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"Subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"Matrix of shape {m.shape} does not match subsystem dimensions {dims}")

    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"Subsystem labels {keep} out of range for {len(dims)} subsystems")

    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    reshaped = m.reshape(dims + dims)

    # contract row and column index of every traced subsystem
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in traced:
        col[i] = row[i]
    out_idx = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum(reshaped, row + col, out_idx)

    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def clamped_eigh(m, tol: float = PSD_TOL):
    """
    Hermitian eigendecomposition with small negative eigenvalues clamped to 0.

    Args:
        m (array-like): Hermitian positive semi-definite matrix.
        tol (float): eigenvalues in [-tol, 0) are clamped, below -tol raise.

    Returns:
        tuple: (eigenvalues, eigenvectors) as returned by np.linalg.eigh.
    """
    vals, vecs = np.linalg.eigh(hermitize(m))
    if vals.size and vals[0] < -tol:
        raise ValueError(f"Matrix is not positive semi-definite (eigenvalue {vals[0]:.3e} < -{tol:.0e})")
    vals = np.clip(vals, 0.0, None)
    return vals, vecs


def hermitian_sqrt(m, tol: float = PSD_TOL) -> np.ndarray:
    """
    Principal square root of a positive semi-definite matrix.
    """
    vals, vecs = clamped_eigh(m, tol=tol)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def _check_pair(rho, sigma):
    rho, sigma = as_matrix(rho), as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"States have different dimensions: {rho.shape} vs {sigma.shape}")
    return rho, sigma


def uhlmann_fidelity(rho, sigma, tol: float = PSD_TOL) -> float:
    """
    Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(sigma) rho sqrt(sigma)).

    Computed as the nuclear norm of sqrt(rho) sqrt(sigma), which equals the
    trace expression and keeps rank-deficient states accurate.

    Args:
        rho, sigma (DensityMatrix or array-like): states of equal dimension.
        tol (float): eigenvalue clamp tolerance.

    Returns:
        float: fidelity in [0, 1].

    Example:
        uhlmann_fidelity(np.eye(2) / 2, np.diag([1, 0])) -> 0.70710678...
    """
    rho, sigma = _check_pair(rho, sigma)
    product = hermitian_sqrt(rho, tol=tol) @ hermitian_sqrt(sigma, tol=tol)
    fid = np.sum(np.linalg.svd(product, compute_uv=False))
    return float(np.clip(fid, 0.0, 1.0))


def trace_norm(m) -> float:
    """Trace (nuclear) norm of an arbitrary square matrix."""
    return float(np.sum(np.linalg.svd(as_matrix(m), compute_uv=False)))


def trace_distance(rho, sigma) -> float:
    """
    Normalized trace distance D = 1/2 ||rho - sigma||_1, in [0, 1].
    """
    rho, sigma = _check_pair(rho, sigma)
    eigs = np.linalg.eigvalsh(hermitize(rho - sigma))
    return float(np.clip(0.5 * np.sum(np.abs(eigs)), 0.0, 1.0))


def bures_distance(rho, sigma) -> float:
    """
    Bures distance d_B = sqrt(2 [1 - F(rho, sigma)]).
    """
    fid = uhlmann_fidelity(rho, sigma)
    return float(np.sqrt(max(2.0 * (1.0 - fid), 0.0)))


def random_density_matrix(dim: int, rng: Union[np.random.Generator, int, None] = None, rank: int = None) -> DensityMatrix:
    """
    Random state from the Hilbert-Schmidt ensemble, G G^dagger / Tr(G G^dagger)
    with G a complex Gaussian (Ginibre) matrix.

    Args:
        dim (int): dimension.
        rng (np.random.Generator or int): random generator or seed.
        rank (int): number of columns of G (default full rank).
    """
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.real(np.trace(rho)))


def random_unitary(dim: int, rng: Union[np.random.Generator, int, None] = None) -> np.ndarray:
    """
    Haar-random unitary from the QR decomposition of a Ginibre matrix.
    """
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases
