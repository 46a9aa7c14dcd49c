"""Hash kernels for trace fingerprinting.

Prefers the compiled extension, falls back to pure Python when the
extension is not built. Set TRACELIGHT_PURE=1 to force the fallback
(used by the benchmark and the test matrix).
"""

import os

from . import _pure

BACKEND: str

if os.environ.get("TRACELIGHT_PURE"):
    fnv1a_64 = _pure.fnv1a_64
    BACKEND = "pure"
else:
    try:
        from ._native import fnv1a_64  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        fnv1a_64 = _pure.fnv1a_64
        BACKEND = "pure"

__all__ = ["fnv1a_64", "BACKEND"]
