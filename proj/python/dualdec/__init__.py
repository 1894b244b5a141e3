"""Duality-based distributed optimization with coupling constraints.

The heavy lifting lives in the compiled extension; this package simply
re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, __version__  # noqa: F401
