"""Stationary states, orbital dynamics, and stability checks for the
semi-relativistic Schroedinger-Poisson system on a box.

Everything lives in the compiled extension; this package is a thin veneer.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
