# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from metroStretch.gaussian_tools.gaussian import (
    GaussianState,
    bk_teleport_channel,
    gaussian_fidelity,
    symplectic_form,
    tmsv,
    apply_gaussian,
)
from metroStretch.metrology_tools import CONVERGENCE_TOL, QfiResult

logger = logging.getLogger(__name__)

CV_STEP_SCALE = 1e-3
MONOTONE_TOL = 1e-3
BK_GRID = 41

qfi_routes = ['fidelity', 'moments']
closed_form_routes = ['asymptotic', 'suboptimal']


@dataclass
class ChoiLimitReport:
    """
    Extrapolated QFI of the asymptotic Choi matrix.

    Attributes:
        value (float): extrapolated r -> infinity QFI.
        r_grid (list): squeezing values used.
        values (list): finite-r QFIs on r_grid.
        ratio (float): ratio of the last two increments, None if undefined.
        monotone (bool): whether the finite-r QFIs increase with r.
    """

    value: float
    r_grid: List[float] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    ratio: float = None
    monotone: bool = True


def _as_family(family, eta: float = None):
    if isinstance(family, str):
        from metroStretch.Family import ParamFamilyCV

        return ParamFamilyCV(family, eta=eta)
    return family


def cv_step(theta: float) -> float:
    return CV_STEP_SCALE * max(1.0, abs(theta))


def _check_theta(theta: float, dtheta: float):
    if not dtheta > 0:
        raise ValueError(f"Parameter increment must be positive, got {dtheta}")
    if theta - dtheta / 2 <= 0:
        raise ValueError(f"Parameter {theta} too close to the boundary 0 for increment {dtheta}")


def _fidelity_qfi(state_fn, theta: float, dtheta: float) -> QfiResult:
    def value(d):
        fid = gaussian_fidelity(state_fn(theta - d / 2), state_fn(theta + d / 2))
        return max(8.0 * (1.0 - fid) / d ** 2, 0.0)

    full, half = value(dtheta), value(dtheta / 2)
    scale = max(abs(full), abs(half))
    converged = scale == 0 or abs(full - half) / scale <= CONVERGENCE_TOL
    if not converged:
        warnings.warn(f"Gaussian QFI at theta={theta} not converged: dtheta {dtheta:.2e} gives {full:.8g}, "
                      f"dtheta {dtheta / 2:.2e} gives {half:.8g}")
    return QfiResult(full, 'fidelity', dtheta, converged)


def qfi_moments(state_fn, theta: float, dtheta: float) -> QfiResult:
    """
    Gaussian QFI from the moments,
    QFI = vec(dS)^T (S x S - Omega x Omega)^+ vec(dS) / 2 + dmean^T V^-1 dmean,
    with S = 2V and derivatives by central differences.
    """
    s = state_fn(theta)
    plus, minus = state_fn(theta + dtheta / 2), state_fn(theta - dtheta / 2)
    dS = 2.0 * (plus.cm - minus.cm) / dtheta
    dmean = (plus.mean - minus.mean) / dtheta

    S = 2.0 * s.cm
    J = symplectic_form(s.modes)
    M = np.kron(S, S) - np.kron(J, J)
    vec = dS.reshape(-1, order='F')
    value = 0.5 * vec @ np.linalg.pinv(M, rcond=1e-12, hermitian=True) @ vec
    value += dmean @ np.linalg.solve(s.cm, dmean)
    return QfiResult(max(float(value), 0.0), 'moments', dtheta, True)


def qfi_gaussian(family, theta: float, r: float, dtheta: float = None, eta: float = None, route: str = 'fidelity') -> QfiResult:
    """
    QFI of the finite-squeezing Choi state (E_theta x I)(tmsv(r)).

    Args:
        family (str or ParamFamilyCV): 'thermal_loss', 'amplifier', 'additive' or a family object.
        theta (float): nbar (thermal_loss, amplifier) or nu (additive).
        r (float): squeezing of the TMSV probe.
        dtheta (float): increment. Default 1e-3 max(1, |theta|).
        eta (float): transmissivity or gain when family is a name.
        route (str): 'fidelity' (default) or 'moments'.

    Returns:
        QfiResult: the finite-r QFI.

    Example:
        qfi_gaussian('thermal_loss', 1.0, r=3, eta=0.5).value -> ~0.5
    """
    fam = _as_family(family, eta)
    dtheta = cv_step(theta) if dtheta is None else dtheta
    _check_theta(theta, dtheta)
    if r < 0:
        raise ValueError(f"Squeezing must be non-negative, got {r}")

    state_fn = lambda t: fam.choi_state(t, r)
    if route == 'fidelity':
        res = _fidelity_qfi(state_fn, theta, dtheta)
    elif route == 'moments':
        res = qfi_moments(state_fn, theta, dtheta)
    else:
        raise ValueError(f"Unknown QFI route '{route}', choose from {qfi_routes}")
    logger.debug(f"{fam.kind} QFI at theta={theta}, r={r}: {res.value:.10g} ({route})")
    return res


def qfi_choi_limit(family, theta: float, r_grid: Sequence[float] = (1.0, 2.0, 3.0), eta: float = None,
                   dtheta: float = None, route: str = 'fidelity') -> ChoiLimitReport:
    """
    QFI of the asymptotic Choi matrix, extrapolated from an increasing r-grid.

    The finite-r values approach the limit as a power series in x = exp(-2r);
    Q(r) = Q_inf + a x + b x^2 is fitted over the grid (exactly through three
    points, least squares beyond) and the intercept Q_inf is returned.
    A decrease of the finite-r values beyond 0.1% is reported as non-monotone.

    Args:
        family (str or ParamFamilyCV): channel family.
        theta (float): nbar or nu.
        r_grid (list): increasing squeezing values, at least 3. Default (1, 2, 3).
        eta (float): transmissivity or gain when family is a name.

    Returns:
        ChoiLimitReport: extrapolated value and convergence diagnostics.
    """
    r_grid = [float(r) for r in r_grid]
    if len(r_grid) < 3:
        raise ValueError(f"Extrapolation needs at least 3 squeezing values, got {len(r_grid)}")
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError(f"Squeezing grid must be strictly increasing, got {r_grid}")

    fam = _as_family(family, eta)
    values = [qfi_gaussian(fam, theta, r, dtheta=dtheta, route=route).value for r in r_grid]

    monotone = all(b >= a * (1 - MONOTONE_TOL) for a, b in zip(values, values[1:]))
    if not monotone:
        warnings.warn(f"Finite-squeezing QFI of {fam.kind} at theta={theta} is not monotone in r: {values}")

    q1, q2, q3 = values[-3:]
    d1, d2 = q2 - q1, q3 - q2
    ratio = d2 / d1 if d1 != 0 else None
    x = np.exp(-2.0 * np.asarray(r_grid))
    value = float(np.polynomial.polynomial.polyfit(x, values, 2)[0])
    logger.debug(f"{fam.kind} Choi limit at theta={theta}: values {values}, ratio {ratio}, limit {value:.10g}")
    return ChoiLimitReport(value, r_grid, values, ratio, monotone)


def qfi_suboptimal(family, theta: float, dtheta: float = None, eta: float = None) -> QfiResult:
    """
    QFI of the finite-energy resource family sigma_nu(theta), whose BK
    teleportation with gain sqrt(eta) simulates the channel exactly. Its
    inverse bounds the variance of any adaptive estimator from above by the
    QCRB n^-1 QFI^-1: nbar^-2 for thermal-loss and amplifier in nbar, nu^-2
    for the additive channel in nu.

    Args:
        family (str or ParamFamilyCV): channel family.
        theta (float): nbar or nu.
        dtheta (float): increment. Default 1e-3 max(1, |theta|).
        eta (float): transmissivity or gain when family is a name.

    Returns:
        QfiResult: method 'fidelity'.
    """
    fam = _as_family(family, eta)
    dtheta = cv_step(theta) if dtheta is None else dtheta
    _check_theta(theta, dtheta)
    return _fidelity_qfi(lambda t: fam.resource(t).to_state(), theta, dtheta)


def cv_closed_form_qfi(kind: str, theta: float, route: str = 'asymptotic') -> float:
    """
    Closed-form QFIs of the phase-insensitive families.

    asymptotic: [nbar (nbar + 1)]^-1 for thermal-loss and amplifier, nu^-2 for additive.
    suboptimal: nbar^-2 for thermal-loss and amplifier, nu^-2 for additive.
    """
    kind = kind.replace('-', '_').lower()
    if kind not in ('thermal_loss', 'amplifier', 'additive'):
        raise ValueError(f"No closed form for '{kind}'")
    if route not in closed_form_routes:
        raise ValueError(f"Unknown route '{route}', choose from {closed_form_routes}")
    if not theta > 0:
        raise ValueError(f"Closed-form QFI needs a positive parameter, got {theta}")
    if kind == 'additive' or route == 'suboptimal':
        return 1.0 / theta ** 2
    return 1.0 / (theta * (theta + 1.0))


def bk_error_lower_bound(r: float, N: float, g: float = 1.0, grid: int = BK_GRID) -> float:
    """
    LOWER bound on the energy-bounded simulation error of BK teleportation
    over tmsv(r) with gain g, in the unnormalized trace norm.

    The error 2 (1 - F) between input and teleported output is maximized
    over coherent inputs with mean photon number <= N and over TMSV inputs,
    teleported on one mode, with total photon number <= N. Since the
    simulation of any channel E as E o BK inherits this error, the same
    number bounds its simulation error from below too.

    Args:
        r (float): squeezing of the resource, >= 0.
        N (float): energy bound, >= 0.
        g (float): gain. Default 1.
        grid (int): points per test family. Default 41.

    Returns:
        float: lower bound on the simulation error.

    Example:
        bk_error_lower_bound(4, 1) -> ~6.7e-4
    """
    if r < 0 or N < 0:
        raise ValueError(f"Squeezing and energy must be non-negative, got r={r}, N={N}")
    ch = bk_teleport_channel(tmsv(r), g)

    worst = 0.0
    for amp in np.linspace(0.0, np.sqrt(2.0 * N), grid):
        probe = GaussianState(0.5 * np.eye(2), [amp, 0.0])
        worst = max(worst, 2.0 * (1.0 - gaussian_fidelity(probe, apply_gaussian(ch, probe))))
    for s in np.linspace(0.0, np.arcsinh(np.sqrt(N / 2.0)), grid):
        probe = tmsv(s)
        worst = max(worst, 2.0 * (1.0 - gaussian_fidelity(probe, apply_gaussian(ch, probe, mode=0))))

    logger.debug(f"BK error lower bound at r={r}, N={N}, g={g}: {worst:.6e}")
    return worst


def output_error_bound(delta: float, n: int) -> float:
    """
    Trace-norm error n delta between the n-use output of an adaptive protocol
    run on a channel and on a simulation of it with single-use error delta.
    """
    if delta < 0 or n < 1:
        raise ValueError(f"Need delta >= 0 and n >= 1, got delta={delta}, n={n}")
    return n * delta


def bures_qfi_bound(fidelity: float, n: int, delta: float, dtheta: float) -> float:
    """
    Upper bound 4 [sqrt(2 (1 - F^n)) + 2 sqrt(n delta)]^2 / dtheta^2 on the
    n-use QFI from the finite-energy resource fidelity F between neighbouring
    parameters and the simulation error delta.
    """
    if not 0 <= fidelity <= 1:
        raise ValueError(f"Fidelity must lie in [0, 1], got {fidelity}")
    if delta < 0 or n < 1 or not dtheta > 0:
        raise ValueError(f"Need delta >= 0, n >= 1 and dtheta > 0, got delta={delta}, n={n}, dtheta={dtheta}")
    return 4.0 * (np.sqrt(2.0 * (1.0 - fidelity ** n)) + 2.0 * np.sqrt(n * delta)) ** 2 / dtheta ** 2
