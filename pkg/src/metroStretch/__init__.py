# This source code is part of the metroStretch package and is distributed
# under the MIT License.


from importlib import metadata

__version__ = metadata.version("metroStretch")
__name__ = "metroStretch"
__author__ = "metroStretch developers"

from .linalg_tools.linalg import DensityMatrix
from .channel_tools.channels import KrausChannel, CorrectionTable, make_channel, choi
from .gaussian_tools.gaussian import GaussianState, GaussianChannel, ResourceCM
from .Family.family import ParamFamilyDV, ParamFamilyCV
from .metrology_tools.qfi import QfiResult, qfi_sld, qfi_fidelity
