"""Frequency-domain analysis of reset control systems.

Thin python facade over the C++ core: describing functions and HOSIDFs of
reset controllers, closed-loop sensitivity prediction, hybrid time-domain
simulation and quadratic-stability certification.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
