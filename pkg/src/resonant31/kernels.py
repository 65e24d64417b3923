"""Backend selection for the hot kernels.

The compiled module is used when it was built and ``RESONANT31_PURE`` is unset;
otherwise the pure-Python implementation is loaded.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

try:
    if os.environ.get("RESONANT31_PURE"):
        raise ImportError("pure backend requested")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

active = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

carlson_rf = active.carlson_rf
carlson_rj = active.carlson_rj
quartic_t = active.quartic_t
quartic_t_batch = active.quartic_t_batch
strang_run = active.strang_run
reduced_run = active.reduced_run
