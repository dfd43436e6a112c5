# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for Monte Carlo estimation experiments and their Cramer-Rao bounds.
"""

__author__ = "metroStretch developers"

from .estimation import *
