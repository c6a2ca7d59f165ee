"""Estimator kernels: compiled when available, pure Python otherwise.

Set ``STEERCRLB_PURE=1`` to force the pure-Python implementation.
"""

import os

from . import _pykernels as python

compiled = None
if os.environ.get("STEERCRLB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

response = _impl.response
grid_argmax = _impl.grid_argmax
golden_max = _impl.golden_max
maximize_response = _impl.maximize_response
