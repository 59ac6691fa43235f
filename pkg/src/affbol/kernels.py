"""Backend selection for the hot kernels.

The compiled extension is used when it was built; set ``AFFBOL_PURE=1`` to
force the pure-Python reference implementation.
"""

import os

from . import _pykernels

if os.environ.get("AFFBOL_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
prepare = _impl.prepare
search_seed = _impl.search_seed
and_popcount_matrix = _impl.and_popcount_matrix

BACKENDS = {"python": _pykernels}
try:
    from . import _ckernels

    BACKENDS["cython"] = _ckernels
except ImportError:
    pass
