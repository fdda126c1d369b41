"""Frame-level speaker change, overlap and voice activity toolkit."""

from ._scdkit import *  # noqa: F401,F403
from ._scdkit import __doc__  # noqa: F401

__version__ = "0.1.0"
