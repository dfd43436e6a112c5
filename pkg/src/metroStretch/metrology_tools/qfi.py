# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from metroStretch.linalg_tools import as_matrix, clamped_eigh, hermitize, uhlmann_fidelity

logger = logging.getLogger(__name__)

# pairs with lambda_j + lambda_k below the cutoff do not enter the SLD
SLD_CUTOFF = 1e-12
STEP_SCALE = 1e-5
CONVERGENCE_TOL = 1e-3

dv_closed_form_kinds = ['erasure', 'dephasing', 'depolarizing']


@dataclass
class QfiResult:
    """
    Quantum Fisher information of a state family at one parameter value.

    Attributes:
        value (float): the QFI, >= 0.
        method (str): 'sld', 'fidelity' or 'closed_form'.
        step (float): finite-difference step, None for closed forms.
        converged (bool): False when halving the step moved the value by more than 0.1%.
    """

    value: float
    method: str
    step: float = None
    converged: bool = True

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"QFI must be non-negative, got {self.value}")
        if self.method != 'closed_form' and not (self.step and self.step > 0):
            raise ValueError(f"Numerical QFI needs a positive step, got {self.step}")

    def __float__(self):
        return float(self.value)


def default_step(theta: float) -> float:
    """Central-difference step h = 1e-5 max(1, |theta|)."""
    return STEP_SCALE * max(1.0, abs(theta))


def sld(rho, drho, cutoff: float = SLD_CUTOFF) -> np.ndarray:
    """
    Symmetric logarithmic derivative in the eigenbasis {e_j} of rho,
    L = sum 2 / (l_j + l_k) <e_j|drho|e_k> |e_j><e_k| over pairs with l_j + l_k > cutoff.

    Args:
        rho (DensityMatrix or array-like): state.
        drho (array-like): Hermitian derivative of rho.
        cutoff (float): eigenvalue-sum cutoff. Default 1e-12.

    Returns:
        np.ndarray: the Hermitian operator L.

    Example:
        sld(np.diag([0.25, 0.75]), np.diag([1, -1])) -> diag(4, -4/3)
    """
    rho, drho = as_matrix(rho), hermitize(drho)
    if rho.shape != drho.shape:
        raise ValueError(f"State and derivative have different shapes: {rho.shape} vs {drho.shape}")
    vals, vecs = clamped_eigh(rho)
    d_eig = vecs.conj().T @ drho @ vecs
    sums = vals[:, None] + vals[None, :]
    weights = np.zeros_like(sums)
    mask = sums > cutoff
    weights[mask] = 2.0 / sums[mask]
    return hermitize(vecs @ (weights * d_eig) @ vecs.conj().T)


def _sld_value(rho, drho, cutoff: float = SLD_CUTOFF) -> float:
    L = sld(rho, drho, cutoff=cutoff)
    return max(float(np.real(np.trace(L @ L @ as_matrix(rho)))), 0.0)


def _check_interior(theta: float, h: float, domain):
    if domain is None:
        return
    lo, hi = domain
    if theta - h < lo or theta + h > hi:
        raise ValueError(f"Parameter {theta} is at the boundary of the domain {domain}, one-sided differences are not supported")


def _relative_change(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def qfi_sld_states(state_fn: Callable, theta: float, step: float = None, domain=None, cutoff: float = SLD_CUTOFF) -> QfiResult:
    """
    QFI Tr(L^2 rho) of an arbitrary state family theta -> rho_theta, with the
    derivative taken by central differences and checked by step halving.

    Args:
        state_fn (callable): theta -> DensityMatrix or matrix.
        theta (float): parameter value.
        step (float): difference step. Default 1e-5 max(1, |theta|).
        domain (tuple): interval of allowed parameters, checked if given.
        cutoff (float): SLD eigenvalue-sum cutoff.

    Returns:
        QfiResult: method 'sld'.
    """
    h = default_step(theta) if step is None else step
    if not h > 0:
        raise ValueError(f"Finite-difference step must be positive, got {h}")
    _check_interior(theta, h, domain)

    rho = as_matrix(state_fn(theta))

    def value(step):
        drho = (as_matrix(state_fn(theta + step)) - as_matrix(state_fn(theta - step))) / (2 * step)
        return _sld_value(rho, drho, cutoff=cutoff)

    full, half = value(h), value(h / 2)
    converged = _relative_change(full, half) <= CONVERGENCE_TOL
    if not converged:
        warnings.warn(f"SLD QFI at theta={theta} not converged: step {h:.2e} gives {full:.8g}, step {h / 2:.2e} gives {half:.8g}")
    logger.debug(f"SLD QFI at theta={theta}: {full:.10g} (step {h:.2e})")
    return QfiResult(full, 'sld', h, converged)


def qfi_fidelity_states(state_fn: Callable, theta: float, dtheta: float = 1e-4, domain=None) -> QfiResult:
    """
    QFI from the fidelity of neighbouring states, 8 [1 - F(rho_{theta - d/2}, rho_{theta + d/2})] / d^2.
    The evaluation points are symmetric around theta. Halving d must change
    the value by less than 0.1%, otherwise the result is flagged unconverged.

    Args:
        state_fn (callable): theta -> DensityMatrix or matrix.
        theta (float): parameter value.
        dtheta (float): parameter increment. Default 1e-4.
        domain (tuple): interval of allowed parameters, checked if given.

    Returns:
        QfiResult: method 'fidelity'.
    """
    if not dtheta > 0:
        raise ValueError(f"Parameter increment must be positive, got {dtheta}")
    _check_interior(theta, dtheta / 2, domain)

    def value(d):
        fid = uhlmann_fidelity(state_fn(theta - d / 2), state_fn(theta + d / 2))
        return max(8.0 * (1.0 - fid) / d ** 2, 0.0)

    full, half = value(dtheta), value(dtheta / 2)
    converged = _relative_change(full, half) <= CONVERGENCE_TOL
    if not converged:
        warnings.warn(f"Fidelity QFI at theta={theta} not converged: dtheta {dtheta:.2e} gives {full:.8g}, "
                      f"dtheta {dtheta / 2:.2e} gives {half:.8g}")
    return QfiResult(full, 'fidelity', dtheta, converged)


def qfi_sld(family, theta: float, step: float = None) -> QfiResult:
    """
    QFI of the family output (E_theta x I)(probe) by the SLD route.

    Args:
        family (ParamFamilyDV): the channel family and its probe.
        theta (float): interior parameter value.
        step (float): difference step. Default 1e-5 max(1, |theta|).

    Returns:
        QfiResult: method 'sld'.

    Example:
        qfi_sld(ParamFamilyDV('dephasing'), 0.5).value -> 4.0
    """
    return qfi_sld_states(family.state, theta, step=step, domain=family.domain)


def qfi_fidelity(family, theta: float, dtheta: float = 1e-4) -> QfiResult:
    """
    QFI of the family output (E_theta x I)(probe) by the fidelity route.
    """
    return qfi_fidelity_states(family.state, theta, dtheta=dtheta, domain=family.domain)


def closed_form_dv_qfi(kind: str, p: float, convention: str = 'pauli') -> float:
    """
    QFI of the Choi matrix of the erasure, dephasing and depolarizing
    families, 1 / [p (1 - p)]. For the depolarizing map written as
    (1 - p) rho + p I/2 (convention 'mixing') the value is
    9 / [4 (4 - 3p)] + 3 / (4p).

    Args:
        kind (str): 'erasure', 'dephasing' or 'depolarizing'.
        p (float): probability parameter in (0, 1).
        convention (str): depolarizing convention. Default 'pauli'.

    Returns:
        float: the closed-form QFI.
    """
    if kind not in dv_closed_form_kinds:
        raise ValueError(f"No closed form for '{kind}', choose from {dv_closed_form_kinds}")
    if not 0 < p < 1:
        raise ValueError(f"Closed-form QFI diverges at the boundary, p must lie in (0, 1), got {p}")
    if kind == 'depolarizing' and convention == 'mixing':
        return 9.0 / (4.0 * (4.0 - 3.0 * p)) + 3.0 / (4.0 * p)
    if kind == 'depolarizing' and convention != 'pauli':
        raise ValueError(f"Unknown depolarizing convention '{convention}'")
    return 1.0 / (p * (1.0 - p))


def qcrb(qfi_single: float, n: int = 1) -> float:
    """
    Quantum Cramer-Rao bound 1 / (n QFI) on the variance of an unbiased estimator from n uses.

    Example:
        qcrb(4, 100) -> 0.0025
    """
    qfi_single = float(qfi_single)
    if not qfi_single > 0:
        raise ValueError(f"QCRB needs a positive QFI, got {qfi_single}")
    if n < 1:
        raise ValueError(f"Number of uses must be at least 1, got {n}")
    return 1.0 / (n * qfi_single)


def stretching_bound(program_qfi: float, n: int, m: int = 1) -> float:
    """
    Ceiling m n QFI(pi) on the QFI of any adaptive protocol with n uses of a
    programmable channel with program state pi, when the protocol can consume
    m copies of the program per use (m <= n).

    Args:
        program_qfi (float): QFI of the program state, >= 0.
        n (int): number of channel uses.
        m (int): copies of the program state per use. Default 1.

    Returns:
        float: upper bound on the QFI of the n-use output.
    """
    program_qfi = float(program_qfi)
    if program_qfi < 0:
        raise ValueError(f"Program QFI must be non-negative, got {program_qfi}")
    if n < 1 or m < 1:
        raise ValueError(f"Uses and copies must be positive, got n={n}, m={m}")
    if m > n:
        raise ValueError(f"Copies per use m={m} cannot exceed the number of uses n={n}")
    return m * n * program_qfi
