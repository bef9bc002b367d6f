"""Kernel backend selection.

The compiled extension is preferred; the numpy fallback is used when the
extension is absent or when BUFFONLAB_BACKEND=fallback is set.  Both
expose the same functions with bit-identical results, so the choice never
changes any output, only speed.
"""

from __future__ import annotations

import os

_FORCED = os.environ.get("BUFFONLAB_BACKEND", "").strip().lower()

if _FORCED not in ("", "compiled", "fallback"):
    raise ImportError(
        f"BUFFONLAB_BACKEND must be 'compiled' or 'fallback', got {_FORCED!r}")

if _FORCED == "fallback":
    from . import _pykernels as kernels
    BACKEND = "fallback"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        from . import _pykernels as kernels  # type: ignore[no-redef]
        BACKEND = "fallback"

uniforms = kernels.uniforms
needle_chunk = kernels.needle_chunk
run_lengths = kernels.run_lengths
window_scan = kernels.window_scan
cross_count = kernels.cross_count


# Fixed simulation chunk size, in throws.  Changing it would regroup the
# floating-point reductions and so change results; it is part of the
# reproducibility contract, not a tuning knob.
CHUNK_THROWS = 1 << 17


def backend_name() -> str:
    """Active kernel backend, 'compiled' or 'fallback'."""
    return BACKEND
