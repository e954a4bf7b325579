"""Backend selection for the hot loops.

Set ``PARTIAL_HAWKES_DISABLE_NUMBA=1`` before import to force the pure-numpy
path (also used when numba is not installed).
"""

import os

_FLAG = "PARTIAL_HAWKES_DISABLE_NUMBA"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

DISABLED = os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not DISABLED

if USE_NUMBA:
    from . import _loops_numba as loops
else:
    from . import _loops_numpy as loops

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["loops", "BACKEND", "USE_NUMBA", "HAVE_NUMBA"]
