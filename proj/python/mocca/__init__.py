"""Parallel-MRI reconstruction with model-based coil calibration."""

try:
    from ._mocca import *  # noqa: F401,F403
    from ._mocca import __version__  # noqa: F401
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _mocca import *  # noqa: F401,F403
    from _mocca import __version__  # noqa: F401
