# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import Union

import numpy as np

from metroStretch.linalg_tools import DensityMatrix, as_matrix, random_density_matrix, trace_distance
from metroStretch.channel_tools import PAULIS, CorrectionTable, KrausChannel, apply_channel, choi

logger = logging.getLogger(__name__)

PROB_TOL = 1e-10


class BellBasis:
    """
    The four Bell states |Phi_a> = (I x s_a)|Phi+> of two qubits.

    Attributes:
        vectors (np.ndarray): 4 x 4 array, row a holds |Phi_a>.
        states (list): rank-1 projectors |Phi_a><Phi_a|.
        paulis (tuple): s_0 .. s_3.
    """

    def __init__(self):
        phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        self.paulis = PAULIS
        self.vectors = np.array([np.kron(np.eye(2), s) @ phi for s in PAULIS])
        self.vectors.setflags(write=False)
        self.states = [np.outer(v, v.conj()) for v in self.vectors]

    def __len__(self):
        return 4

    def __iter__(self):
        return iter(self.states)

    def __str__(self):
        return "metroStretch.BellBasis(|Phi_0>, |Phi_1>, |Phi_2>, |Phi_3>)"

    __repr__ = __str__


def bell_basis() -> BellBasis:
    """Return the Bell basis; its projectors are orthogonal and sum to I_4."""
    return BellBasis()


def _conditional_outputs(rho, resource, out_dim: int = None):
    """
    Unnormalized output of the receiving subsystem for each Bell outcome.

    The input qubit a is Bell-measured together with the second (qubit)
    subsystem A of the resource; the first resource subsystem B is the output.
    """
    rho = as_matrix(rho)
    resource = as_matrix(resource)
    if rho.shape != (2, 2):
        raise ValueError(f"Teleported input must be a qubit state, got shape {rho.shape}")
    if resource.shape[0] % 2 or resource.shape[0] != resource.shape[1]:
        raise ValueError(f"Resource of shape {resource.shape} has no qubit second subsystem")
    d_out = resource.shape[0] // 2
    if out_dim is not None and out_dim != d_out:
        raise ValueError(f"Resource output dimension {d_out} does not match corrections acting on {out_dim}")

    # resource ordered (B, A) -> (A, B)
    res_ab = resource.reshape(d_out, 2, d_out, 2).transpose(1, 0, 3, 2).reshape(2 * d_out, 2 * d_out)
    joint = np.kron(rho, res_ab).reshape(4, d_out, 4, d_out)

    basis = bell_basis()
    return [np.einsum('i,ijkl,k->jl', v.conj(), joint, v) for v in basis.vectors]


def bell_outcome_probabilities(rho, resource) -> np.ndarray:
    """
    Probabilities of the four Bell outcomes when the input is measured with
    the resource's qubit subsystem.
    """
    outputs = _conditional_outputs(rho, resource)
    return np.array([np.real(np.trace(o)) for o in outputs])


def teleport(rho, resource, corrections: CorrectionTable) -> DensityMatrix:
    """
    Deterministic teleportation channel T(rho x resource): Bell detection of
    the input with the resource qubit, followed by the conditional correction
    V_a^dagger on the output, averaged over the four outcomes.

    With the Choi matrix of a teleportation-covariant channel as resource the
    output equals the channel output. Any other bipartite program state can be
    used as resource as well.

    Args:
        rho (DensityMatrix or array-like): qubit input.
        resource (DensityMatrix or array-like): state on (output x qubit).
        corrections (CorrectionTable): V_a for the four outcomes.

    Returns:
        DensityMatrix: teleported state.
    """
    outputs = _conditional_outputs(rho, resource, out_dim=corrections.out_dim)
    total = sum(np.real(np.trace(o)) for o in outputs)
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"Bell outcome probabilities sum to {total:.12f}, expected 1")

    out = sum(v.conj().T @ o @ v for v, o in zip(corrections.output_unitaries, outputs))
    return DensityMatrix(out / total)


def simulate_and_compare(ch: KrausChannel, table: CorrectionTable, trials: int = 100,
                         seed: Union[int, np.random.Generator, None] = None, resource=None) -> float:
    """
    Maximal trace distance between the channel output and the teleportation
    simulation over random Hilbert-Schmidt input states.

    Args:
        ch (KrausChannel): qubit-input channel.
        table (CorrectionTable): corrections for the simulation.
        trials (int): number of random inputs. Default 100.
        seed (int or np.random.Generator): randomness source.
        resource (DensityMatrix): program state. Default choi(ch).

    Returns:
        float: maximal trace distance.
    """
    if trials < 1:
        raise ValueError(f"Number of trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    resource = choi(ch) if resource is None else resource

    worst = 0.0
    for _ in range(trials):
        rho = random_density_matrix(2, rng)
        worst = max(worst, trace_distance(apply_channel(ch, rho), teleport(rho, resource, table)))

    logger.debug(f"teleportation simulation of {ch.kind}(p={ch.param}): max distance {worst:.3e} over {trials} inputs")
    return worst
