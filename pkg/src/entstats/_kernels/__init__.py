"""Hot purity kernels: compiled extension when built, numpy otherwise.

Set ENTSTATS_PURE_PYTHON=1 to force the numpy fallback (used by the
benchmark and by backend-agreement tests).
"""

import os

from . import fallback

if os.environ.get("ENTSTATS_PURE_PYTHON"):
    _impl = fallback
else:
    try:
        from . import _fastpurity as _impl
    except ImportError:
        _impl = fallback

BACKEND = _impl.BACKEND
purity_fixed_batch = _impl.purity_fixed_batch
purity_weighted_batch = _impl.purity_weighted_batch
