"""Unitary-transform spectral denoising: Python bindings to the C++ core."""

from ._unitone import *  # noqa: F401,F403
from ._unitone import __doc__  # noqa: F401
