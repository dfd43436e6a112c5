# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for dense matrix utilities: states, tensor products, partial traces and distances.
"""

__author__ = "metroStretch developers"

from .linalg import *
