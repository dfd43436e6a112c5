# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from metroStretch.linalg_tools import as_matrix, hermitize
from metroStretch.channel_tools import choi, make_channel
from metroStretch.teleport_tools import bell_basis
from metroStretch.metrology_tools import closed_form_dv_qfi, qcrb

logger = logging.getLogger(__name__)

POVM_TOL = 1e-10
SEED_MODULUS = 2 ** 63
estimation_kinds = ['erasure', 'dephasing', 'depolarizing']


@dataclass
class ExperimentResult:
    """
    Outcome of a block estimation experiment.

    Attributes:
        kind (str): channel family.
        theta_true (float): true channel parameter.
        n (int): channel uses per trial.
        trials (int): repetitions.
        estimates (list): one estimate per trial.
        empirical_var (float): mean squared deviation of the estimates from theta_true.
        qcrb (float): quantum Cramer-Rao bound for n uses.
        seed (int): master seed; identical seeds give identical results.
        convention (str): depolarizing convention, None for other families.
        variance_defined (bool): False for a single trial.
    """

    kind: str
    theta_true: float
    n: int
    trials: int
    estimates: List[float] = field(default_factory=list)
    empirical_var: float = 0.0
    qcrb: float = None
    seed: int = None
    convention: str = None
    variance_defined: bool = True

    def __post_init__(self):
        if len(self.estimates) != self.trials:
            raise ValueError(f"Expected {self.trials} estimates, got {len(self.estimates)}")
        if self.empirical_var < 0:
            raise ValueError(f"Empirical variance must be non-negative, got {self.empirical_var}")

    @property
    def standard_error(self) -> float:
        """Standard error of empirical_var, from the spread of the squared deviations."""
        sq = (np.asarray(self.estimates) - self.theta_true) ** 2
        if self.trials < 2:
            return float('nan')
        return float(np.std(sq, ddof=1) / np.sqrt(self.trials))

    def to_dict(self) -> dict:
        return asdict(self)


def fresh_seed() -> int:
    """Seed from fresh OS entropy, reduced to a non-negative signed 64-bit integer."""
    return int(np.random.SeedSequence().entropy % SEED_MODULUS)


def check_povm(povm: Sequence, dim: int = None, tol: float = POVM_TOL) -> List[np.ndarray]:
    """
    Return the POVM elements as arrays after checking they are PSD and sum to the identity.
    """
    if len(povm) == 0:
        raise ValueError("A POVM needs at least one element")
    elems = [hermitize(e) for e in povm]
    dim = elems[0].shape[0] if dim is None else dim
    for k, e in enumerate(elems):
        if e.shape != (dim, dim):
            raise ValueError(f"POVM element {k} has shape {e.shape}, expected {(dim, dim)}")
        if np.min(np.linalg.eigvalsh(e)) < -tol:
            raise ValueError(f"POVM element {k} is not positive semi-definite")
    err = np.max(np.abs(sum(elems) - np.eye(dim)))
    if err > tol:
        raise ValueError(f"POVM elements do not sum to the identity (deviation {err:.3e})")
    return elems


def outcome_probabilities(state, povm: Sequence) -> np.ndarray:
    rho = as_matrix(state)
    elems = check_povm(povm, dim=rho.shape[0])
    probs = np.clip([np.real(np.trace(e @ rho)) for e in elems], 0.0, None)
    return probs / probs.sum()


def sample_povm(state, povm: Sequence, shots: int, seed: Union[int, np.random.Generator, None] = None) -> np.ndarray:
    """
    Multinomial outcome counts of `shots` independent measurements of a POVM.

    Args:
        state (DensityMatrix or array-like): measured state.
        povm (list): PSD elements summing to the identity.
        shots (int): number of measurements.
        seed (int or np.random.Generator): randomness source.

    Returns:
        np.ndarray: counts per element, summing to shots.
    """
    if shots < 0:
        raise ValueError(f"Number of shots must be non-negative, got {shots}")
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, outcome_probabilities(state, povm))


def block_povm(kind: str) -> List[np.ndarray]:
    """
    Bell-basis measurement of the Choi state; for the erasure channel the
    Bell projectors act on the qubit block and a fifth element detects the flag.
    """
    bells = bell_basis().states
    if kind != 'erasure':
        return bells
    povm = []
    for b in bells:
        e = np.zeros((6, 6), dtype=complex)
        e[:4, :4] = b
        povm.append(e)
    flag = np.zeros((6, 6), dtype=complex)
    flag[4, 4] = flag[5, 5] = 1.0
    povm.append(flag)
    return povm


def _estimate(kind: str, counts: np.ndarray, n: int, convention: str) -> float:
    if kind == 'erasure':
        return counts[4] / n
    if kind == 'dephasing':
        return counts[3] / n
    flips = counts[1:4].sum() / n
    return 4.0 * flips / 3.0 if convention == 'mixing' else flips


def run_block_experiment(kind: str, p_true: float, n: int, trials: int, seed: Union[int, None] = None,
                         convention: str = 'mixing') -> ExperimentResult:
    """
    Entanglement-assisted block protocol: each of n channel uses is probed
    with half of Phi+, the output pair is Bell-measured and p is estimated
    from outcome frequencies (phase-flip outcome for dephasing, flag for
    erasure, the three non-Phi+ outcomes for depolarizing, scaled by 4/3 in
    the mixing convention). Trials use seeds spawned from the master seed.

    Args:
        kind (str): 'erasure', 'dephasing' or 'depolarizing'.
        p_true (float): true parameter in (0, 1).
        n (int): channel uses per trial.
        trials (int): number of repetitions.
        seed (int): master seed; drawn and logged when None.
        convention (str): depolarizing convention. Default 'mixing'.

    Returns:
        ExperimentResult: estimates, empirical variance and QCRB.
    """
    if kind not in estimation_kinds:
        raise ValueError(f"Unknown family '{kind}', choose from {estimation_kinds}")
    if not 0 < p_true < 1:
        raise ValueError(f"True parameter must lie in (0, 1), got {p_true}")
    if n < 1 or trials < 1:
        raise ValueError(f"Need n >= 1 and trials >= 1, got n={n}, trials={trials}")
    if seed is None:
        seed = fresh_seed()
        logger.info(f"no seed given, using {seed}")

    state = choi(make_channel(kind, p_true, convention=convention))
    povm = block_povm(kind)
    children = np.random.SeedSequence(seed).spawn(trials)

    estimates = []
    for child in children:
        counts = sample_povm(state, povm, n, np.random.default_rng(child))
        estimates.append(float(_estimate(kind, counts, n, convention)))

    empirical_var = float(np.mean((np.asarray(estimates) - p_true) ** 2))
    variance_defined = trials > 1
    if not variance_defined:
        warnings.warn("A single trial does not define an empirical variance")

    conv = convention if kind == 'depolarizing' else None
    bound = qcrb(closed_form_dv_qfi(kind, p_true, convention=conv or 'pauli'), n)
    logger.info(f"{kind} p={p_true}, n={n}, trials={trials}: variance {empirical_var:.4e}, QCRB {bound:.4e}")
    return ExperimentResult(kind, p_true, n, trials, estimates, empirical_var, bound, seed, conv, variance_defined)


def sql_scaling_fit(results: Sequence[Union[ExperimentResult, Tuple[float, float]]]) -> float:
    """
    Least-squares slope of log(variance) against log(n); -1 is the standard quantum limit.

    Args:
        results (list): ExperimentResults or (n, variance) pairs, at least
            3 distinct n spanning 2 decades.

    Returns:
        float: the fitted slope.
    """
    pairs = [(r.n, r.empirical_var) if isinstance(r, ExperimentResult) else tuple(r) for r in results]
    ns = np.array([p[0] for p in pairs], dtype=float)
    var = np.array([p[1] for p in pairs], dtype=float)
    if len(np.unique(ns)) < 3 or np.log10(ns.max() / ns.min()) < 2 - 1e-9:
        raise ValueError(f"Scaling fit needs at least 3 n-values spanning 2 decades, got {sorted(set(ns.tolist()))}")
    if np.any(var <= 0):
        raise ValueError("Scaling fit needs positive variances")
    slope, _ = np.polyfit(np.log(ns), np.log(var), 1)
    return float(slope)
