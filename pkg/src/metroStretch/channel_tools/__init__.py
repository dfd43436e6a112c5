# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for discrete-variable channels: Kraus families, Choi matrices and teleportation covariance.
"""

__author__ = "metroStretch developers"

from .channels import *
