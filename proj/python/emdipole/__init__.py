"""Python access to the emdipole simulation and reconstruction core."""

from ._emdipole import *  # noqa: F401,F403
from ._emdipole import __doc__  # noqa: F401
