"""Sampling kernel with a compiled fast path and a numpy fallback.

The compiled extension is used when it imported successfully and the
``NETGOF_PURE`` environment variable is unset.  Both implementations are
bit-compatible: given the same uniform block they return the same counts,
so which backend is active never changes results, only speed.
"""

import os

from . import pure

try:
    from . import _sampler as _compiled
except ImportError:  # extension not built on this install
    _compiled = None

if _compiled is not None and not os.environ.get("NETGOF_PURE"):
    BACKEND = "compiled"
    _impl = _compiled
else:
    BACKEND = "pure"
    _impl = pure

HAVE_COMPILED = _compiled is not None


def edge_counts(indptr, indices, edge_u, edge_v, k, uniforms):
    return _impl.edge_counts(indptr, indices, edge_u, edge_v, k, uniforms)
