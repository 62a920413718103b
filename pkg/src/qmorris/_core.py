"""Backend selection: compiled extension if available, pure Python otherwise.

Set ``QMORRIS_PURE=1`` in the environment to force the pure backend (used by
the parity tests and the benchmark).
"""

import os

from . import _pure

if os.environ.get("QMORRIS_PURE", "") not in ("", "0"):
    impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        impl = _pure
        BACKEND = "pure"

qp_add = impl.qp_add
qp_mul = impl.qp_mul
qp_mul_mono = impl.qp_mul_mono
ml_mul = impl.ml_mul
expand_product = impl.expand_product
expand_coeff = impl.expand_coeff
classify_block = impl.classify_block

EARLY_SMALL = _pure.EARLY_SMALL
CLOSE_PAIR = _pure.CLOSE_PAIR
EXCEPTIONAL = _pure.EXCEPTIONAL


def backend_name():
    """Name of the active backend: "compiled" or "pure"."""
    return BACKEND
