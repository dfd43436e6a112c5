# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage concerned with the parametrized channel families of metroStretch.
"""

__author__ = "metroStretch developers"

from .family import *
