"""Quantum operations, Choi/Kraus representations, and coexistence decisions."""

try:
    from ._qcoex import *  # noqa: F401,F403
    from ._qcoex import __version__  # noqa: F401
except ImportError:  # plain CMake build: extension on sys.path, not in package
    from _qcoex import *  # noqa: F401,F403
    from _qcoex import __version__  # noqa: F401
