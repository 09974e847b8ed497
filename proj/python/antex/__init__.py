"""Knowledge-based antenna pattern extrapolation.

Thin python layer over the C++ core: forward pattern models over parametric
design spaces, the recursive configuration-search / constrained-least-squares
inversion solver, sampling layouts and model-order selection.
"""

try:
    from ._antex import *  # noqa: F401,F403
    from ._antex import __doc__ as _core_doc  # noqa: F401
except ImportError:  # running against a build tree on PYTHONPATH
    from _antex import *  # noqa: F401,F403

__version__ = "0.1.0"
