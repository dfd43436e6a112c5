# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for qubit teleportation and Choi-matrix channel simulation.
"""

__author__ = "metroStretch developers"

from .teleport import *
