# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import List

from metroStretch.estimation_tools import fresh_seed

logger = logging.getLogger(__name__)

DV_FAMILIES = ['erasure', 'dephasing', 'depolarizing']
CV_FAMILIES = ['thermal_loss', 'amplifier', 'additive']
SUITES = ['teleport', 'resource', 'covariance', 'fidelity']
QFI_METHODS = ['sld', 'fidelity']


def parse_grid(text: str) -> List[float]:
    """
    Parse a comma-separated list of numbers, '0.1,0.5,0.9' -> [0.1, 0.5, 0.9].
    An empty string gives an empty grid.
    """
    if text is None:
        return []
    items = [t.strip() for t in str(text).split(',') if t.strip()]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise ValueError(f"Could not parse grid '{text}', expected comma-separated numbers")


class RunConfig:
    """
    The RunConfig object holds everything a command needs to run. It is
    fully determined by its keyword arguments; nothing is read from files.

    Attributes:
        command (str): 'qfi-table', 'verify', 'fig-finite-qfi', 'estimate' or 'bk-error'.
        family (str): channel family.
        grid (list): parameter grid (p, nbar or nu).
        r (list): squeezing values.
        eta (float): transmissivity or gain of the CV families.
        n (list): channel uses.
        N (list): energy bounds for bk-error.
        g (float): teleportation gain.
        trials (int): Monte Carlo repetitions.
        seed (int): master seed, generated when None.
        suite (str): verification suite or 'all'.
        perturb (float): fault injected into the verification suites.
        method (str): 'sld' or 'fidelity' for qfi-table, 'numeric' or 'closed' for fig-finite-qfi.
        convention (str): depolarizing convention.
        out (str): output path, None for stdout.
        fmt (str): 'csv' or 'json'.
    """

    commands = ['qfi-table', 'verify', 'fig-finite-qfi', 'estimate', 'bk-error']
    formats = ['csv', 'json']

    def __init__(self, **kwargs):
        self._set_attributes(**kwargs)

    def _set_attributes(self, **kwargs):
        defaults = {
            'command': None,
            'family': 'dephasing',
            'grid': [],
            'r': [3.0],
            'eta': None,
            'n': [],
            'N': [1.0],
            'g': 1.0,
            'trials': 100,
            'seed': None,
            'suite': 'all',
            'perturb': 0.0,
            'method': None,
            'convention': None,
            'out': None,
            'fmt': 'csv',
        }

        # Update defaults with provided keyword arguments
        defaults.update(kwargs)

        for key, value in defaults.items():
            setattr(self, key, value)

        if self.family is not None:
            self.family = self.family.replace('-', '_').lower()
        if self.method is None:
            self.method = 'sld' if self.command == 'qfi-table' else 'numeric'

    def __str__(self):
        return f"metroStretch.RunConfig({', '.join(f'{k}={v}' for k, v in vars(self).items())})"

    __repr__ = __str__

    @property
    def is_cv(self) -> bool:
        return self.family in CV_FAMILIES

    def ensure_seed(self) -> int:
        """Draw and log a seed if none was given."""
        if self.seed is None:
            self.seed = fresh_seed()
            logger.warning(f"no seed given, using --seed {self.seed}")
        return self.seed

    def validate(self):
        """
        Raise a ValueError on an inconsistent configuration.
        """
        if self.command not in self.commands:
            raise ValueError(f"Unknown command '{self.command}', choose from {self.commands}")
        if self.fmt not in self.formats:
            raise ValueError(f"Unknown output format '{self.fmt}', choose from {self.formats}")
        if self.trials < 1:
            raise ValueError(f"Number of trials must be positive, got {self.trials}")

        if self.command == 'qfi-table':
            if self.family not in DV_FAMILIES + CV_FAMILIES:
                raise ValueError(f"Unknown family '{self.family}', choose from {DV_FAMILIES + CV_FAMILIES}")
            self._require('parameter', self.grid)
            if self.is_cv:
                self._require('squeezing', self.r)
                if len(self.r) == 2:
                    raise ValueError("Give one squeezing value or at least 3 for extrapolation")
            if self.method not in QFI_METHODS:
                raise ValueError(f"Unknown method '{self.method}', choose from {QFI_METHODS}")
            if any(n < 1 for n in self.n):
                raise ValueError(f"Channel uses must be positive, got {self.n}")

        elif self.command == 'verify':
            if self.suite != 'all' and self.suite not in SUITES:
                raise ValueError(f"Unknown suite '{self.suite}', choose from {SUITES} or 'all'")
            if self.perturb < 0:
                raise ValueError(f"Perturbation must be non-negative, got {self.perturb}")

        elif self.command == 'fig-finite-qfi':
            self._require('nbar', self.grid)
            if any(x <= 0 for x in self.grid):
                raise ValueError(f"Photon numbers must be positive, got {self.grid}")
            if self.method not in ('numeric', 'closed'):
                raise ValueError(f"Unknown method '{self.method}', choose 'numeric' or 'closed'")
            self._require('squeezing', self.r)

        elif self.command == 'estimate':
            if self.family not in DV_FAMILIES:
                raise ValueError(f"Estimation runs on {DV_FAMILIES}, got '{self.family}'")
            self._require('parameter', self.grid)
            self._require('channel-use', self.n)
            if any(n < 1 for n in self.n):
                raise ValueError(f"Channel uses must be positive, got {self.n}")

        elif self.command == 'bk-error':
            self._require('squeezing', self.r)
            self._require('energy', self.N)

    @staticmethod
    def _require(name: str, grid):
        if grid is None or len(grid) == 0:
            raise ValueError(f"The {name} grid is empty")
