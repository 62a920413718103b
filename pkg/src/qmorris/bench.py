"""Benchmark the pure-Python and compiled backends on the hot kernels.

The workloads mirror what the verification suites actually spend time on:
symbolic kernel expansion, specialized-q expansion for interpolation
samples, and the exhaustive tuple classifier.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import _pure
from .kernels import build_hk_kernel, build_qdyson_kernel, cancel, fold_pure_q
from .kernels import poly_factor_terms, scalar_factor_terms
from .ct_engine import order_factors
from .laurent import zero_vec

try:
    from . import _speedups
except ImportError:
    _speedups = None


def _workloads():
    hk = fold_pure_q(cancel(build_hk_kernel(3, 3, 2, 2, 2, 3)))
    hk_big = fold_pure_q(cancel(build_hk_kernel(3, 6, 1, 2, 2, 3)))
    dyson = fold_pure_q(cancel(build_qdyson_kernel((2, 2, 2, 1, 1))))
    q0 = Fraction(3, 2)

    def sym(backend):
        factors, pre = poly_factor_terms(hk)
        factors = order_factors(factors, hk.nvars)
        return backend.expand_coeff(factors, pre, hk.nvars, zero_vec(hk.nvars), False)

    def sample(backend):
        factors, pre = scalar_factor_terms(hk_big, q0)
        factors = order_factors(factors, hk_big.nvars)
        return backend.expand_coeff(
            factors, pre, hk_big.nvars, zero_vec(hk_big.nvars), True
        )

    def dyson_q1(backend):
        factors, pre = scalar_factor_terms(dyson, 1)
        factors = order_factors(factors, dyson.nvars)
        return backend.expand_coeff(
            factors, pre, dyson.nvars, zero_vec(dyson.nvars), True
        )

    def classifier(backend):
        return backend.classify_block(4, 2, 5)

    return [
        ("hk symbolic ct", sym),
        ("interp sample ct", sample),
        ("dyson ct at q=1", dyson_q1),
        ("classifier 20^5", classifier),
    ]


def _time(fn, backend, repeat):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(backend)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best * 1000.0, result


def run_bench(repeat=3):
    """Time each workload on both backends; verifies they agree."""
    rows = []
    for name, fn in _workloads():
        pure_ms, pure_out = _time(fn, _pure, repeat)
        if _speedups is not None:
            comp_ms, comp_out = _time(fn, _speedups, repeat)
            if (
                pure_out != comp_out
                and list(pure_out) != list(comp_out)  # array('I') vs array('I')
            ):
                raise AssertionError("backend disagreement on %s" % name)
            speedup = pure_ms / comp_ms if comp_ms else None
        else:
            comp_ms, speedup = None, None
        rows.append(
            {
                "name": name,
                "pure_ms": pure_ms,
                "compiled_ms": comp_ms,
                "speedup": speedup,
            }
        )
    return {"compiled_available": _speedups is not None, "workloads": rows}
