# This source code is part of the metroStretch package and is distributed
# under the MIT License.

__author__ = "metroStretch developers"

import logging
from typing import Callable, Tuple, Union

import numpy as np

from metroStretch.linalg_tools import DensityMatrix, as_matrix
from metroStretch.channel_tools import KrausChannel, make_channel, phi_plus
from metroStretch.gaussian_tools import (
    GaussianChannel,
    GaussianState,
    ResourceCM,
    choi_cm,
    finite_resource,
    make_gaussian_channel,
)

logger = logging.getLogger(__name__)


class ParamFamilyDV:
    """
    The ParamFamilyDV object is a map theta -> KrausChannel together with the
    probe it is interrogated with. Channels are probed on half of the probe
    state, the rest is kept as an idle ancilla.

    Attributes:
        kind (str): 'erasure', 'dephasing', 'depolarizing' or 'custom'.
        convention (str): depolarizing parametrization. Default 'pauli', in which p is the total Pauli-error probability.
        probe (DensityMatrix): probe state. Default Phi+.
        domain (tuple): closed interval of allowed parameters. Default (0, 1).
    """

    families = ['erasure', 'dephasing', 'depolarizing']

    def __init__(self, kind: str, probe: Union[DensityMatrix, None] = None, convention: str = 'pauli',
                 channel_fn: Union[Callable[[float], KrausChannel], None] = None, domain: Tuple[float, float] = (0.0, 1.0)):
        """
        Initialize a parametrized channel family.

        Args:
            kind (str): family name, or 'custom' together with channel_fn.
            probe (DensityMatrix): probe state on (channel input x ancilla). Default Phi+.
            convention (str): depolarizing convention, 'pauli' or 'mixing'. Default 'pauli'.
            channel_fn (callable): theta -> KrausChannel, required for kind 'custom'.
            domain (tuple): interval on which channel_fn is defined. Default (0, 1).
        """
        if kind == 'custom':
            if channel_fn is None:
                raise ValueError("A custom family needs a channel_fn")
        elif kind not in self.families:
            raise ValueError(f"Unknown family '{kind}', choose from {self.families} or 'custom'")

        self.kind = kind
        self.convention = convention
        self.channel_fn = channel_fn
        self.domain = domain
        self.probe = phi_plus() if probe is None else DensityMatrix(probe)

        ref = self.channel(0.5 * (domain[0] + domain[1]))
        self.in_dim, self.out_dim = ref.in_dim, ref.out_dim
        if self.probe.dim % self.in_dim:
            raise ValueError(f"Probe dimension {self.probe.dim} is not a multiple of the channel input dimension {self.in_dim}")
        self.ancilla_dim = self.probe.dim // self.in_dim

    def __str__(self):
        return (f"metroStretch.ParamFamilyDV():\n____________________\nkind\t: {self.kind}\nconvention\t: {self.convention}\n"
                f"domain\t: {self.domain}\nprobe dim\t: {self.probe.dim}\n")

    __repr__ = __str__

    def in_domain(self, theta: float) -> bool:
        return self.domain[0] <= theta <= self.domain[1]

    def channel(self, theta: float) -> KrausChannel:
        """Channel at parameter theta."""
        if not self.in_domain(theta):
            raise ValueError(f"Parameter {theta} outside the family domain {self.domain}")
        if self.kind == 'custom':
            return self.channel_fn(theta)
        return make_channel(self.kind, theta, convention=self.convention)

    def state(self, theta: float) -> DensityMatrix:
        """
        Output state (E_theta x I)(probe).
        """
        ch = self.channel(theta)
        kraus = np.array([np.kron(k, np.eye(self.ancilla_dim)) for k in ch.kraus])
        probe = as_matrix(self.probe)
        return DensityMatrix(np.einsum('kij,jl,kml->im', kraus, probe, kraus.conj()))


class ParamFamilyCV:
    """
    The ParamFamilyCV object is a one-parameter family of phase-insensitive
    Gaussian channels.

    thermal_loss, amplifier: theta is the environment photon number nbar, eta is fixed.
    additive: theta is the added noise nu.

    Attributes:
        kind (str): 'thermal_loss', 'amplifier' or 'additive'.
        eta (float): fixed transmissivity or gain (1 for additive).
    """

    families = ['thermal_loss', 'amplifier', 'additive']

    def __init__(self, kind: str, eta: float = None):
        kind = kind.replace('-', '_').lower()
        if kind not in self.families:
            raise ValueError(f"Unknown Gaussian family '{kind}', choose from {self.families}")
        if kind == 'additive':
            eta = 1.0
        elif eta is None:
            eta = 0.5 if kind == 'thermal_loss' else 2.0
        self.kind = kind
        self.eta = eta
        # fail early on an out-of-range eta
        self.channel(1.0)

    def __str__(self):
        return f"metroStretch.ParamFamilyCV(kind={self.kind}, eta={self.eta})"

    __repr__ = __str__

    @property
    def parameter(self) -> str:
        return 'nu' if self.kind == 'additive' else 'nbar'

    def channel(self, theta: float) -> GaussianChannel:
        if self.kind == 'additive':
            return make_gaussian_channel('additive', nu=theta)
        return make_gaussian_channel(self.kind, eta=self.eta, nbar=theta)

    def nu(self, theta: float) -> float:
        """Added noise of the channel at theta."""
        return float(self.channel(theta).N[0, 0])

    def choi_state(self, theta: float, r: float) -> GaussianState:
        """Finite-squeezing Choi state at theta."""
        return choi_cm(self.channel(theta), r)

    def resource(self, theta: float) -> ResourceCM:
        """Finite-energy teleportation resource simulating the channel at theta."""
        return finite_resource(self.eta, self.nu(theta))
