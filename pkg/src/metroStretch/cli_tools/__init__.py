# This source code is part of the metroStretch package and is distributed
# under the MIT License.

"""
A subpackage for the command line interface: run configuration and the metroStretch commands.
"""

__author__ = "metroStretch developers"

from .config import *
from .cli import main
