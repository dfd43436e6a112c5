# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import argparse
import json
import logging
import sys
from typing import List, Tuple

import numpy as np
import pandas as pd

from metroStretch.channel_tools import (
    COVARIANCE_TOL,
    CorrectionTable,
    make_channel,
    pauli_table,
    verify_tele_covariance,
    choi,
)
from metroStretch.teleport_tools import simulate_and_compare
from metroStretch.Family import ParamFamilyDV
from metroStretch.metrology_tools import closed_form_dv_qfi, qcrb, qfi_fidelity, qfi_sld
from metroStretch.gaussian_tools import (
    bk_error_lower_bound,
    bk_teleport_channel,
    coherent,
    cv_closed_form_qfi,
    displace,
    finite_resource,
    gaussian_fidelity,
    qfi_choi_limit,
    qfi_gaussian,
    qfi_suboptimal,
    thermal,
    tmsv,
    vacuum,
)
from metroStretch.fock_tools import fock_state, oracle_fidelity
from metroStretch.estimation_tools import run_block_experiment, sql_scaling_fit
from metroStretch.cli_tools.config import DV_FAMILIES, SUITES, RunConfig, parse_grid

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'
P_GRID = np.round(np.arange(1, 10) / 10, 10)
RESOURCE_ETAS = [0.2, 0.5, 0.8, 1.0, 1.5, 2.0]
RESOURCE_EXCESS = [0.05, 0.5, 2.0]
ORACLE_TOL = 1e-4
RESOURCE_TOL = 1e-12

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DV_QFI_METHODS = {'sld': qfi_sld, 'fidelity': qfi_fidelity}


### commands
def cmd_qfi_table(config: RunConfig) -> pd.DataFrame:
    """
    Numerical QFI against its closed form over a parameter grid.
    Columns param, qfi_numeric, qfi_closed, rel_err (and qcrb_n<n> for each requested n).
    """
    rows = []
    for theta in sorted(config.grid):
        if config.is_cv:
            if len(config.r) == 1:
                numeric = qfi_gaussian(config.family, theta, config.r[0], eta=config.eta).value
            else:
                numeric = qfi_choi_limit(config.family, theta, sorted(config.r), eta=config.eta).value
            closed = cv_closed_form_qfi(config.family, theta, route='asymptotic')
        else:
            convention = config.convention or 'pauli'
            family = ParamFamilyDV(config.family, convention=convention)
            numeric = DV_QFI_METHODS[config.method](family, theta).value
            closed = closed_form_dv_qfi(config.family, theta, convention=convention)
        row = {'param': theta, 'qfi_numeric': numeric, 'qfi_closed': closed, 'rel_err': abs(numeric - closed) / closed}
        for n in config.n:
            row[f'qcrb_n{int(n)}'] = qcrb(closed, int(n))
        rows.append(row)
        logger.info(f"qfi-table {config.family} at {theta}: {numeric:.8g} (closed form {closed:.8g})")
    return pd.DataFrame(rows, columns=['param', 'qfi_numeric', 'qfi_closed', 'rel_err'] + [f'qcrb_n{int(n)}' for n in config.n])


def _suite_teleport(config: RunConfig) -> Tuple[int, float]:
    rng = np.random.default_rng(config.seed)
    worst, checks = 0.0, 0
    for kind in DV_FAMILIES:
        for p in P_GRID:
            ch = make_channel(kind, p)
            table = pauli_table(ch.out_dim)
            resource = choi(ch)
            if config.perturb:
                resource = (1 - config.perturb) * resource.data + config.perturb * np.eye(resource.dim) / resource.dim
            worst = max(worst, simulate_and_compare(ch, table, config.trials, rng, resource=resource))
            checks += config.trials
    return checks, worst


def _suite_resource(config: RunConfig) -> Tuple[int, float]:
    worst, checks = 0.0, 0
    for eta in RESOURCE_ETAS:
        for excess in RESOURCE_EXCESS:
            nu = abs(1 - eta) / 2 + excess
            res = finite_resource(eta, nu + config.perturb)
            g = np.sqrt(eta)
            ch = bk_teleport_channel(res, g)
            a, b, c = res.A[0, 0], res.B[0, 0], res.C[0, 0]
            dev = max(np.max(np.abs(ch.T - g * np.eye(2))), np.max(np.abs(ch.N - nu * np.eye(2))),
                      abs(a * g ** 2 - 2 * c * g + b - nu))
            worst = max(worst, dev)
            checks += 1
    return checks, worst


def _suite_covariance(config: RunConfig) -> Tuple[int, float]:
    worst, checks = 0.0, 0
    twist = np.diag([np.exp(-0.5j * config.perturb), np.exp(0.5j * config.perturb)])
    for kind in DV_FAMILIES:
        for p in np.linspace(0, 1, 11):
            ch = make_channel(kind, p)
            table = pauli_table(ch.out_dim)
            if config.perturb:
                outs = []
                for v in table.output_unitaries:
                    v = np.array(v)
                    v[:2, :2] = v[:2, :2] @ twist
                    outs.append(v)
                table = CorrectionTable(outs)
            _, dev = verify_tele_covariance(ch, table)
            worst = max(worst, dev)
            checks += 1
    return checks, worst


def _suite_fidelity(config: RunConfig) -> Tuple[int, float]:
    eps = config.perturb
    pairs = [
        (vacuum(), thermal(1.0 + eps), fock_state('vacuum'), fock_state('thermal', nbar=1.0)),
        (thermal(0.5 + eps), thermal(1.0), fock_state('thermal', nbar=0.5), fock_state('thermal', nbar=1.0)),
        (coherent(0.8 + eps), vacuum(), fock_state('coherent', alpha=0.8), fock_state('vacuum')),
        (displace(thermal(0.3 + eps), 0.5 - 0.4j), coherent(0.2j),
         fock_state('displaced_thermal', alpha=0.5 - 0.4j, nbar=0.3), fock_state('coherent', alpha=0.2j)),
        (tmsv(0.5 + eps), tmsv(0.6), fock_state('tmsv', r=0.5), fock_state('tmsv', r=0.6)),
    ]
    worst = 0.0
    for g1, g2, f1, f2 in pairs:
        worst = max(worst, abs(gaussian_fidelity(g1, g2) - oracle_fidelity(f1, f2)))
    return len(pairs), worst


SUITE_RUNNERS = {
    'teleport': (_suite_teleport, 1e-10),
    'resource': (_suite_resource, RESOURCE_TOL),
    'covariance': (_suite_covariance, COVARIANCE_TOL),
    'fidelity': (_suite_fidelity, ORACLE_TOL),
}


def cmd_verify(config: RunConfig) -> Tuple[pd.DataFrame, bool]:
    """
    Run the verification suites. Returns the report (suite, checks,
    max_deviation, tolerance, passed) and whether every suite passed.
    """
    config.ensure_seed()
    suites = SUITES if config.suite == 'all' else [config.suite]
    rows = []
    for name in suites:
        runner, tol = SUITE_RUNNERS[name]
        checks, worst = runner(config)
        rows.append({'suite': name, 'checks': checks, 'max_deviation': worst, 'tolerance': tol, 'passed': bool(worst <= tol)})
        logger.info(f"suite {name}: {checks} checks, max deviation {worst:.3e}")
    report = pd.DataFrame(rows, columns=['suite', 'checks', 'max_deviation', 'tolerance', 'passed'])
    return report, bool(report['passed'].all())


def cmd_fig_finite_qfi(config: RunConfig) -> pd.DataFrame:
    """
    Asymptotic against sub-optimal QFI of thermal-loss channels in nbar.
    Columns nbar, qfi_asymptotic, qfi_suboptimal.
    """
    eta = 0.6 if config.eta is None else config.eta
    r_grid = sorted(config.r) if len(config.r) >= 3 else [1.0, 2.0, 3.0]
    rows = []
    for nbar in sorted(config.grid):
        if config.method == 'closed':
            asym = cv_closed_form_qfi('thermal_loss', nbar, route='asymptotic')
            sub = cv_closed_form_qfi('thermal_loss', nbar, route='suboptimal')
        else:
            asym = qfi_choi_limit('thermal_loss', nbar, r_grid, eta=eta).value
            sub = qfi_suboptimal('thermal_loss', nbar, eta=eta).value
        rows.append({'nbar': nbar, 'qfi_asymptotic': asym, 'qfi_suboptimal': sub})
    return pd.DataFrame(rows, columns=['nbar', 'qfi_asymptotic', 'qfi_suboptimal'])


def cmd_estimate(config: RunConfig) -> dict:
    """
    Block estimation experiments over the n-grid and their SQL scaling slope.
    """
    seed = config.ensure_seed()
    p = config.grid[0]
    ns = sorted(int(n) for n in config.n)
    seeds = np.random.SeedSequence(seed).generate_state(len(ns))
    convention = config.convention or 'mixing'

    results = [run_block_experiment(config.family, p, n, config.trials, int(s), convention=convention) for n, s in zip(ns, seeds)]
    try:
        slope = sql_scaling_fit(results)
    except ValueError as e:
        logger.warning(f"no scaling slope: {e}")
        slope = None
    return {'seed': seed, 'family': config.family, 'p': p, 'slope': slope, 'results': [r.to_dict() for r in results]}


def cmd_bk_error(config: RunConfig) -> pd.DataFrame:
    """
    Lower bound on the BK simulation error over r and N grids. Columns r, N, lower_bound.
    """
    rows = [{'r': r, 'N': N, 'lower_bound': bk_error_lower_bound(r, N, g=config.g)}
            for r in sorted(config.r) for N in sorted(config.N)]
    return pd.DataFrame(rows, columns=['r', 'N', 'lower_bound'])


### output
def _emit(text: str, out: str = None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w', newline='') as f:
            f.write(text)


def format_table(df: pd.DataFrame, fmt: str) -> str:
    if fmt == 'json':
        return df.to_json(orient='records', double_precision=12) + '\n'
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def format_estimate(report: dict, fmt: str) -> str:
    if fmt == 'json':
        return json.dumps(report, sort_keys=True, default=float) + '\n'
    df = pd.DataFrame([{
        'n': r['n'],
        'empirical_var': r['empirical_var'],
        'qcrb': r['qcrb'],
        'mean_estimate': float(np.mean(r['estimates'])),
        'trials': r['trials'],
        'seed': r['seed'],
        'slope': report['slope'],
    } for r in report['results']])
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


### parser
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='metroStretch', description="Channel simulation and quantum Fisher information toolkit")
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug messages on stderr.')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', dest='fmt', type=str, default='csv', help='Output format, csv or json.')
    common.add_argument('--out', type=str, default=None, help='Output path (default stdout).')
    common.add_argument('--seed', type=int, default=None, help='Master random seed.')

    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('qfi-table', parents=[common], help='Numerical against closed-form QFI.')
    p.add_argument('--family', type=str, default='dephasing', help='erasure, dephasing, depolarizing, thermal-loss, amplifier or additive.')
    p.add_argument('--p', type=str, default=None, help='Comma-separated probabilities (DV families).')
    p.add_argument('--nbar', type=str, default=None, help='Comma-separated photon numbers (thermal-loss, amplifier).')
    p.add_argument('--nu', type=str, default=None, help='Comma-separated added noise (additive).')
    p.add_argument('--r', type=str, default='3', help='Squeezing, one value or at least 3 for extrapolation.')
    p.add_argument('--eta', type=float, default=None, help='Transmissivity or gain of the CV family.')
    p.add_argument('--n', type=str, default='', help='Comma-separated channel uses; adds QCRB columns.')
    p.add_argument('--method', type=str, default='sld', help='DV route, sld or fidelity.')
    p.add_argument('--convention', type=str, default=None, help='Depolarizing convention, pauli or mixing.')

    v = sub.add_parser('verify', parents=[common], help='Run the verification suites.')
    v.add_argument('--suite', type=str, default='all', help=f"One of {SUITES} or all.")
    v.add_argument('--trials', type=int, default=100, help='Random inputs per teleportation check.')
    v.add_argument('--perturb', type=float, default=0.0, help='Inject a fault of this size (harness self-test).')

    f = sub.add_parser('fig-finite-qfi', parents=[common], help='Asymptotic against sub-optimal thermal-loss QFI.')
    f.add_argument('--nbar', type=str, default='0.25,0.5,1,2,5', help='Comma-separated photon numbers.')
    f.add_argument('--eta', type=float, default=0.6, help='Transmissivity.')
    f.add_argument('--r', type=str, default='1,2,3', help='Squeezing grid for the extrapolation.')
    f.add_argument('--method', type=str, default='numeric', help='numeric or closed.')

    e = sub.add_parser('estimate', parents=[common], help='Block estimation experiment and SQL fit.')
    e.add_argument('--family', type=str, default='dephasing', help='erasure, dephasing or depolarizing.')
    e.add_argument('--p', type=str, default='0.3', help='True parameter.')
    e.add_argument('--n', type=str, default='100,1000,10000', help='Comma-separated channel uses.')
    e.add_argument('--trials', type=int, default=500, help='Repetitions per n.')
    e.add_argument('--convention', type=str, default=None, help='Depolarizing convention, mixing or pauli.')

    b = sub.add_parser('bk-error', parents=[common], help='Lower bound on the BK simulation error.')
    b.add_argument('--r', type=str, default='0,1,2,3,4', help='Comma-separated squeezing values.')
    b.add_argument('--N', type=str, default='1', help='Comma-separated energy bounds.')
    b.add_argument('--g', type=float, default=1.0, help='Teleportation gain.')

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kwargs = {k: v for k, v in vars(args).items() if k not in ('verbose', 'p', 'nbar', 'nu')}
    if args.command in ('qfi-table', 'estimate'):
        family = args.family.replace('-', '_').lower()
        raw = args.nu if family == 'additive' else args.nbar if family in ('thermal_loss', 'amplifier') else args.p
        kwargs['grid'] = parse_grid(raw)
    elif args.command == 'fig-finite-qfi':
        kwargs['grid'] = parse_grid(args.nbar)
    for key in ('r', 'n', 'N'):
        if key in kwargs:
            kwargs[key] = parse_grid(kwargs[key])
    return RunConfig(**kwargs)


def main(argv: List[str] = None) -> int:
    """
    Entry point. Exit codes: 0 success, 1 failed verification, 2 usage error.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)

    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        config = config_from_args(args)
        config.validate()
    except ValueError as e:
        logger.error(str(e))
        return EXIT_USAGE

    try:
        if config.command == 'qfi-table':
            _emit(format_table(cmd_qfi_table(config), config.fmt), config.out)
        elif config.command == 'verify':
            report, ok = cmd_verify(config)
            _emit(format_table(report, config.fmt), config.out)
            return EXIT_OK if ok else EXIT_FAIL
        elif config.command == 'fig-finite-qfi':
            _emit(format_table(cmd_fig_finite_qfi(config), config.fmt), config.out)
        elif config.command == 'estimate':
            _emit(format_estimate(cmd_estimate(config), config.fmt), config.out)
        elif config.command == 'bk-error':
            _emit(format_table(cmd_bk_error(config), config.fmt), config.out)
    except ValueError as e:
        logger.error(str(e))
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
