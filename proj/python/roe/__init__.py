"""Desk-scale text RTS with episodic reflection.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from roe._core import *  # noqa: F401,F403
from roe._core import __doc__  # noqa: F401
