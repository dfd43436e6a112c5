# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for the covariance-matrix formalism: Gaussian states and channels, BK teleportation and Gaussian QFI.
"""

__author__ = "metroStretch developers"

from .gaussian import *
from .gaussian_qfi import *
