"""Quantum-metamaterial photon wavefront detector simulator.

Thin wrapper around the compiled extension; everything public lives there.
"""

try:
    from ._qmmsim import *  # noqa: F401,F403
    from ._qmmsim import __version__, __doc__  # noqa: F401
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _qmmsim import *  # noqa: F401,F403
    from _qmmsim import __version__, __doc__  # noqa: F401
