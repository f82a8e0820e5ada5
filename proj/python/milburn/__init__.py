"""Intrinsic-decoherence dynamics of a driven harmonic oscillator.

Thin wrapper re-exporting the compiled core. See the top-level README for the
config dialect and the CLI.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "1.0.0"
