# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for quantum Fisher information, Cramer-Rao bounds and stretching bounds.
"""

__author__ = "metroStretch developers"

from .qfi import *
