# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import Iterable, Sequence, Tuple

import numpy as np

from metroStretch.linalg_tools import DensityMatrix, as_matrix, trace_norm

logger = logging.getLogger(__name__)

KRAUS_TOL = 1e-12
UNITARY_TOL = 1e-12
COVARIANCE_TOL = 1e-10

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

channel_kinds = ['erasure', 'dephasing', 'depolarizing', 'identity']
depolarizing_conventions = ['mixing', 'pauli']


class KrausChannel:
    """
    A completely positive trace-preserving map given by its Kraus operators.

    Attributes:
        in_dim (int): input dimension.
        out_dim (int): output dimension.
        kraus (np.ndarray): array of shape (r, out_dim, in_dim).
        kind (str): 'erasure', 'dephasing', 'depolarizing' or 'custom'.
        param (float): channel-defining probability p.
        convention (str): parametrization of the depolarizing family, None otherwise.
    """

    def __init__(self, kraus: Sequence, kind: str = 'custom', param: float = None, convention: str = None, tol: float = KRAUS_TOL):
        """
        Initialize a channel and check trace preservation.

        Args:
            kraus (list): non-empty list of out_dim x in_dim matrices.
            kind (str): family tag. Default 'custom'.
            param (float): channel parameter p. Default None.
            convention (str): depolarizing convention ('mixing' or 'pauli'). Default None.
            tol (float): tolerance on sum_i K_i^dagger K_i = I. Default 1e-12.
        """
        if len(kraus) == 0:
            raise ValueError("A channel needs at least one Kraus operator")
        ops = np.array([np.asarray(k, dtype=complex) for k in kraus])
        if ops.ndim != 3:
            raise ValueError("All Kraus operators must be matrices of the same shape")
        ops.setflags(write=False)

        self.kraus = ops
        self.out_dim, self.in_dim = ops.shape[1], ops.shape[2]
        self.kind = kind
        self.param = param
        self.convention = convention

        completeness = np.einsum('kji,kjl->il', ops.conj(), ops)
        err = np.max(np.abs(completeness - np.eye(self.in_dim)))
        if err > tol:
            raise ValueError(f"Kraus operators are not trace preserving (deviation {err:.3e})")

    def __str__(self):
        return (f"metroStretch.KrausChannel():\n____________________\nkind\t: {self.kind}\nparam\t: {self.param}\n"
                f"in_dim\t: {self.in_dim}\nout_dim\t: {self.out_dim}\nkraus\t: {len(self.kraus)} operators\n")

    __repr__ = __str__

    def __call__(self, rho):
        return apply_channel(self, rho)


class CorrectionTable:
    """
    Teleportation corrections: input unitaries U_alpha (Pauli operators) and
    the output unitaries V_alpha they are mapped to by a covariant channel.

    Attributes:
        input_unitaries (list): 4 qubit unitaries.
        output_unitaries (list): 4 unitaries on the channel output.
    """

    def __init__(self, output_unitaries: Sequence, input_unitaries: Sequence = PAULIS, tol: float = UNITARY_TOL):
        if len(input_unitaries) != 4 or len(output_unitaries) != 4:
            raise ValueError(f"A correction table needs 4 input and 4 output unitaries, got {len(input_unitaries)} and {len(output_unitaries)}")
        self.input_unitaries = [np.asarray(u, dtype=complex) for u in input_unitaries]
        self.output_unitaries = [np.asarray(v, dtype=complex) for v in output_unitaries]

        for u in self.input_unitaries + self.output_unitaries:
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise ValueError(f"Correction entries must be square, got shape {u.shape}")
            err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
            if err > tol:
                raise ValueError(f"Correction entry is not unitary (deviation {err:.3e})")
        if len({v.shape for v in self.output_unitaries}) != 1:
            raise ValueError("Output unitaries must share one dimension")

    @property
    def out_dim(self) -> int:
        return self.output_unitaries[0].shape[0]

    def __str__(self):
        return f"metroStretch.CorrectionTable(out_dim={self.out_dim})"

    __repr__ = __str__


def pauli_table(out_dim: int = 2) -> CorrectionTable:
    """
    Pauli correction table. For a qubit output V_alpha = sigma_alpha, for the
    erasure output (out_dim 3) V_alpha = sigma_alpha (+) 1 acting trivially on
    the erasure flag.

    Args:
        out_dim (int): 2 or 3. Default 2.
    """
    if out_dim == 2:
        return CorrectionTable(list(PAULIS))
    if out_dim == 3:
        outs = []
        for s in PAULIS:
            v = np.zeros((3, 3), dtype=complex)
            v[:2, :2] = s
            v[2, 2] = 1.0
            outs.append(v)
        return CorrectionTable(outs)
    raise ValueError(f"No Pauli table for output dimension {out_dim}")


def identity_table(out_dim: int = 2) -> CorrectionTable:
    """Table with V_alpha = identity for every outcome."""
    return CorrectionTable([np.eye(out_dim, dtype=complex)] * 4)


def _check_probability(p: float):
    if not np.isfinite(p) or p < 0 or p > 1:
        raise ValueError(f"Probability parameter must lie in [0, 1], got {p}")


def make_channel(kind: str, p: float = 0.0, convention: str = 'mixing') -> KrausChannel:
    """
    Build one of the teleportation-covariant qubit channel families.

    erasure:       (1-p) rho + p |e><e|, output in span{|0>, |1>, |e>}
    dephasing:     (1-p) rho + p Z rho Z
    depolarizing:  (1-p) rho + p I/2               (convention 'mixing')
                   (1-p) rho + p/3 sum_k s_k rho s_k (convention 'pauli')
    identity:      rho

    Args:
        kind (str): channel family.
        p (float): probability parameter in [0, 1].
        convention (str): depolarizing parametrization. Default 'mixing'.

    Returns:
        KrausChannel: the channel.

    Example:
        make_channel('depolarizing', 0.4)(np.diag([1, 0])) -> diag(0.8, 0.2)
    """
    _check_probability(p)
    I, X, Y, Z = PAULIS

    if kind == 'identity':
        return KrausChannel([I], kind='custom', param=0.0)

    if kind == 'erasure':
        k0 = np.zeros((3, 2), dtype=complex)
        k0[0, 0] = k0[1, 1] = np.sqrt(1 - p)
        k1 = np.zeros((3, 2), dtype=complex)
        k1[2, 0] = np.sqrt(p)
        k2 = np.zeros((3, 2), dtype=complex)
        k2[2, 1] = np.sqrt(p)
        return KrausChannel([k0, k1, k2], kind='erasure', param=p)

    if kind == 'dephasing':
        return KrausChannel([np.sqrt(1 - p) * I, np.sqrt(p) * Z], kind='dephasing', param=p)

    if kind == 'depolarizing':
        if convention == 'mixing':
            w0, w = 1 - 3 * p / 4, p / 4
        elif convention == 'pauli':
            w0, w = 1 - p, p / 3
        else:
            raise ValueError(f"Unknown depolarizing convention '{convention}', choose from {depolarizing_conventions}")
        ops = [np.sqrt(w0) * I] + [np.sqrt(w) * s for s in (X, Y, Z)]
        return KrausChannel(ops, kind='depolarizing', param=p, convention=convention)

    raise ValueError(f"Unknown channel kind '{kind}', choose from {channel_kinds}")


def apply_kraus(ch: KrausChannel, x) -> np.ndarray:
    """
    Linear action sum_i K_i X K_i^dagger on an arbitrary in_dim x in_dim operator.
    """
    x = as_matrix(x)
    if x.shape != (ch.in_dim, ch.in_dim):
        raise ValueError(f"Operator of shape {x.shape} does not match channel input dimension {ch.in_dim}")
    return np.einsum('kij,jl,kml->im', ch.kraus, x, ch.kraus.conj())


def apply_channel(ch: KrausChannel, rho) -> DensityMatrix:
    """
    Apply a channel to a state.

    Args:
        ch (KrausChannel): the channel.
        rho (DensityMatrix or array-like): input state of dimension ch.in_dim.

    Returns:
        DensityMatrix: the output state.
    """
    return DensityMatrix(apply_kraus(ch, rho))


def phi_plus() -> DensityMatrix:
    """The Bell state (|00> + |11>)/sqrt(2) as a projector."""
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return DensityMatrix(np.outer(psi, psi.conj()))


def choi(ch: KrausChannel) -> DensityMatrix:
    """
    Choi matrix (E x I)(Phi+) of a qubit-input channel. The channel output is
    the first subsystem, the ancilla the second.

    Args:
        ch (KrausChannel): channel with in_dim 2.

    Returns:
        DensityMatrix: state of dimension 2 * out_dim.
    """
    if ch.in_dim != 2:
        raise ValueError(f"Choi matrices are built for qubit inputs only, got in_dim {ch.in_dim}")
    out = np.zeros((2 * ch.out_dim, 2 * ch.out_dim), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            out += 0.5 * np.kron(apply_kraus(ch, unit), unit)
    return DensityMatrix(out)


def verify_tele_covariance(ch: KrausChannel, table: CorrectionTable, tol: float = COVARIANCE_TOL) -> Tuple[bool, float]:
    """
    Check E(U_a X U_a^dagger) = V_a E(X) V_a^dagger for every correction and
    every matrix unit X of the input space. By linearity the basis check is
    exhaustive.

    Args:
        ch (KrausChannel): channel to test.
        table (CorrectionTable): candidate corrections.
        tol (float): trace-norm tolerance. Default 1e-10.

    Returns:
        tuple: (covariant, maximal trace-norm deviation)
    """
    if table.out_dim != ch.out_dim:
        raise ValueError(f"Correction table acts on dimension {table.out_dim}, channel output is {ch.out_dim}")
    if table.input_unitaries[0].shape[0] != ch.in_dim:
        raise ValueError(f"Correction table input dimension does not match channel input {ch.in_dim}")

    deviation = 0.0
    for u, v in zip(table.input_unitaries, table.output_unitaries):
        for i in range(ch.in_dim):
            for j in range(ch.in_dim):
                unit = np.zeros((ch.in_dim, ch.in_dim), dtype=complex)
                unit[i, j] = 1.0
                lhs = apply_kraus(ch, u @ unit @ u.conj().T)
                rhs = v @ apply_kraus(ch, unit) @ v.conj().T
                deviation = max(deviation, trace_norm(lhs - rhs))

    logger.debug(f"covariance check for {ch.kind}(p={ch.param}): deviation {deviation:.3e}")
    return deviation <= tol, deviation


def verify_joint_covariance(kind: str, table: CorrectionTable, grid: Iterable[float] = None,
                            convention: str = 'mixing', tol: float = COVARIANCE_TOL) -> Tuple[bool, float]:
    """
    Check that one parameter-independent correction table verifies a whole
    channel family over a parameter grid.

    Args:
        kind (str): channel family.
        table (CorrectionTable): candidate corrections.
        grid (iterable): parameter values. Default 0, 0.1, ..., 1.

    Returns:
        tuple: (jointly covariant, maximal deviation over the grid)
    """
    if grid is None:
        grid = np.linspace(0, 1, 11)
    worst = 0.0
    for p in grid:
        _, dev = verify_tele_covariance(make_channel(kind, float(p), convention=convention), table, tol=tol)
        worst = max(worst, dev)
    return worst <= tol, worst
