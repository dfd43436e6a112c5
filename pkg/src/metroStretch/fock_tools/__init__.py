# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for truncated Fock-space states and channels, used as an oracle for the Gaussian formulas.
"""

__author__ = "metroStretch developers"

from .fock import *
