"""Geodemographic SOM clustering pipeline (python surface of the C++ core)."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits next to this package on sys.path
    # instead of inside it.
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
