"""Emission-based reciprocal Monte Carlo solver for spectral radiative
heat transfer in absorbing/emitting media on Cartesian grids."""

from ._ermc import *  # noqa: F401,F403
from ._ermc import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
