"""Identity checks over parameter grids.

Each check_* function verifies one grid point and returns a VerifyReport;
the CLI and the acceptance suite both run these, so a passing suite and a
passing command line are the same computation.  Grid points are independent
and may be dispatched to a worker pool; report order follows grid order.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool

import numpy as np

from . import ct_engine as engine
from .closed_forms import (
    ParamSet,
    dyson_rhs,
    morris_rewritten_at,
    morris_rhs,
    prop52_lhs,
    prop52_rhs,
    qbinomial_theorem_finite,
    qdyson_rhs,
    vanishing_sets,
)
from .kernels import build_hk_kernel, build_qdyson_kernel
from .laurent import ml_subst

DEFAULT_Q0 = Fraction(3, 2)
ALT_Q0 = Fraction(5, 2)


@dataclass
class VerifyReport:
    command: str
    params: dict
    status: str  # pass | fail | skip | error
    lhs: str = ""
    rhs: str = ""
    certificate: str | None = None
    elapsed_ms: int = 0

    def to_obj(self):
        return {
            "command": self.command,
            "params": self.params,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "certificate": self.certificate,
            "elapsed_ms": self.elapsed_ms,
        }

    def line(self):
        extras = ""
        if self.status == "fail":
            extras = "  lhs=%s rhs=%s" % (self.lhs, self.rhs)
        return "%-4s %-17s %s%s" % (
            self.status.upper(),
            self.command,
            json.dumps(self.params, sort_keys=True),
            extras,
        )


def _finish(command, params, lhs, rhs, t0, certificate=None):
    status = "pass" if lhs == rhs else "fail"
    return VerifyReport(
        command,
        params,
        status,
        lhs,
        rhs,
        certificate,
        int((time.time() - t0) * 1000),
    )


def check_qdyson(a) -> VerifyReport:
    """Constant term of the q-Dyson kernel vs the q-multinomial, symbolically."""
    t0 = time.time()
    a = tuple(a)
    lhs = engine.ct_direct(build_qdyson_kernel(a))
    rhs = qdyson_rhs(a)
    return _finish("verify-qdyson", {"a": list(a)}, str(lhs), str(rhs), t0)


def check_dyson(a) -> VerifyReport:
    """Constant term at q = 1 vs the multinomial coefficient."""
    t0 = time.time()
    a = tuple(a)
    lhs = engine.ct_value_at(build_qdyson_kernel(a), 1)
    rhs = dyson_rhs(a)
    return _finish("verify-dyson", {"a": list(a)}, str(lhs), str(rhs), t0)


def check_hk(n, a, b, m, l, k) -> VerifyReport:
    """Constant term of the refined kernel vs the closed form, symbolically."""
    t0 = time.time()
    params = {"n": n, "a": a, "b": b, "m": m, "l": l, "k": k}
    lhs = engine.ct_direct(build_hk_kernel(n, a, b, m, l, k))
    rhs = morris_rhs(ParamSet(n, a, b, m, l, k))
    return _finish("verify-hk", params, str(lhs), str(rhs), t0)


def _certificate_path(certify_dir, name):
    if certify_dir is None:
        return None
    os.makedirs(certify_dir, exist_ok=True)
    return os.path.join(certify_dir, name)


def _run_certified(p: ParamSet, h, certify_dir, tag):
    """ct_recursion with optional certificate dump; returns (total, path)."""
    total, cert = engine.ct_recursion(p, h)
    failures = cert.validate()
    if failures:
        raise RuntimeError("certificate failed revalidation: %s" % failures[0])
    path = _certificate_path(
        certify_dir, "%s_n%d_b%d_m%d_l%d_k%d_h%d.json" % (tag, p.n, p.b, p.m, p.l, p.k, h)
    )
    if path:
        with open(path, "w") as fh:
            fh.write(cert.to_json(indent=1))
    return total, path


def check_vanishing(n, b, m, l, k, q0s=(DEFAULT_Q0,), certify_dir=None) -> VerifyReport:
    """The interpolated constant-term polynomial vanishes at every root.

    With certify_dir set, also runs the chain recursion at every root and
    writes its certificate tree.
    """
    t0 = time.time()
    params = {"n": n, "b": b, "m": m, "l": l, "k": k, "q0": [str(q) for q in q0s]}
    p = ParamSet(n, 1, b, m, l, k)
    d1, d2, d3 = vanishing_sets(p)
    roots = d1 + d2 + d3
    lhs_vals = []
    expected = []
    cert_path = None
    distinct = len(set(roots))
    lhs_vals.append("roots=%d" % distinct)
    expected.append("roots=%d" % p.degree_bound)
    for q0 in q0s:
        for h in roots:
            lhs_vals.append(str(engine.mprime_at(p, h, q0)))
            expected.append("0")
    if certify_dir is not None:
        for h in sorted(set(roots)):
            total, _ = _run_certified(p, h, certify_dir, "vanishing")
            lhs_vals.append(str(total))
            expected.append("0")
        cert_path = certify_dir if roots else None
    return _finish(
        "verify-vanishing", params, "; ".join(lhs_vals), "; ".join(expected), t0,
        certificate=cert_path,
    )


def check_extra(n, b, m, l, k, q0s=(DEFAULT_Q0,), certify_dir=None) -> VerifyReport:
    """The extra evaluation point h = (n-l-1)k+b+1 matches the closed form."""
    t0 = time.time()
    params = {"n": n, "b": b, "m": m, "l": l, "k": k, "q0": [str(q) for q in q0s]}
    p = ParamSet(n, 1, b, m, l, k)
    h = p.extra_point
    lhs_vals = []
    rhs_vals = []
    cert_path = None
    for q0 in q0s:
        lhs_vals.append(str(engine.mprime_at(p, h, q0)))
        rhs_vals.append(str(morris_rewritten_at(p, -h, q0)))
    if certify_dir is not None:
        total, cert_path = _run_certified(p, h, certify_dir, "extra")
        for q0 in q0s:
            lhs_vals.append(str(total.eval(q0)))
            rhs_vals.append(str(morris_rewritten_at(p, -h, q0)))
    return _finish(
        "verify-extra", params, "; ".join(lhs_vals), "; ".join(rhs_vals), t0,
        certificate=cert_path,
    )


def check_prop52(n, b, k) -> VerifyReport:
    """The boundary summation identity against the Gaussian binomial."""
    t0 = time.time()
    params = {"n": n, "b": b, "k": k}
    lhs = prop52_lhs(n, b, k)
    rhs = prop52_rhs(n, b, k)
    return _finish("verify-prop52", params, str(lhs), str(rhs), t0)


def check_expansion(n, a, b, m, l, k) -> VerifyReport:
    """The composition-sum expansion of the kernel constant term."""
    t0 = time.time()
    params = {"n": n, "a": a, "b": b, "m": m, "l": l, "k": k}
    ok = engine.aomoto_expansion_check(ParamSet(n, a, b, m, l, k))
    return _finish("verify-expansion", params, "equal" if ok else "lhs", "equal", t0)


def brute_classifier_codes(kparam, b, s):
    """Vectorized re-derivation of the classifier verdicts (independent route).

    Returns the packed uint32 codes for all tuples in odometer order.
    """
    top = (s - 1) * kparam + b + 1
    width = top + 1
    total = width**s
    idx = np.arange(total, dtype=np.int64)
    cols = [(idx // (width ** (s - p - 1))) % width for p in range(s)]
    codes = np.zeros(total, dtype=np.uint32)
    decided = np.zeros(total, dtype=bool)
    for p in range(s):
        hit = (~decided) & (cols[p] <= b)
        codes[hit] = (0 << 16) | ((p + 1) << 8)
        decided |= hit
    for i in range(s - 1):
        for j in range(i + 1, s):
            d = cols[j] - cols[i]
            hit = (~decided) & (d >= 1 - kparam) & (d <= kparam)
            codes[hit] = (1 << 16) | ((i + 1) << 8) | (j + 1)
            decided |= hit
    codes[~decided] = 2 << 16
    return codes


def check_lemma42(s, k, b) -> VerifyReport:
    """Exhaustive classifier-vs-brute agreement for one (s, k, b) block.

    Also checks that exactly one tuple is classified Exceptional and that it
    sits where the threshold tuple ((s-1)k+b+1, ..., b+1) belongs.
    """
    t0 = time.time()
    params = {"s": s, "k": k, "b": b}
    codes = np.frombuffer(
        bytes(engine.classify_ktuple_block(k, b, s)), dtype=np.uint32
    )
    brute = brute_classifier_codes(k, b, s)
    top = (s - 1) * k + b + 1
    width = top + 1
    expected_pos = sum(
        ((s - 1 - i) * k + b + 1) * width ** (s - 1 - i) for i in range(s)
    )

    def summarize(arr):
        exc = np.flatnonzero(arr >> 16 == 2)
        digest = hashlib.sha256(arr.tobytes()).hexdigest()[:16]
        return "%d tuples sha=%s exceptional=%s" % (len(arr), digest, exc.tolist())

    lhs = summarize(codes)
    rhs = summarize(brute)
    if [expected_pos] != np.flatnonzero(brute >> 16 == 2).tolist():
        rhs += " (threshold misplaced)"
    return _finish("verify-lemma42", params, lhs, rhs, t0)


def check_m_reduction(n, a, b, l, k) -> VerifyReport:
    """The m = n reduction: kernel identity after rescaling x_0 by q, equal
    constant terms, and the matching identity of closed forms."""
    from .kernels import expand

    t0 = time.time()
    params = {"n": n, "a": a, "b": b, "l": l, "k": k}
    high = build_hk_kernel(n, a, b, n, l, k)
    low = build_hk_kernel(n, a - 1, b + 1, 0, l, k)
    kernels = expand(high) == ml_subst(expand(low), 0, 0, 1)
    cts = engine.ct_direct(high) == engine.ct_direct(low)
    forms = morris_rhs(ParamSet(n, a, b, n, l, k)) == morris_rhs(
        ParamSet(n, a - 1, b + 1, 0, l, k)
    )
    lhs = "kernels %s; ct %s; forms %s" % tuple(
        "equal" if ok else "differ" for ok in (kernels, cts, forms)
    )
    return _finish(
        "verify-reduction", params, lhs, "kernels equal; ct equal; forms equal", t0
    )


def check_qbinom_theorem(N) -> VerifyReport:
    t0 = time.time()
    ok = qbinomial_theorem_finite(N)
    return _finish("verify-qbinom", {"N": N}, "equal" if ok else "differ", "equal", t0)


# ---------------------------------------------------------------------------
# grid running


def _call(job):
    fn, args, kwargs = job
    try:
        return fn(*args, **kwargs)
    except Exception as exc:  # surfaced per grid point, not as a crash
        name = getattr(fn, "__name__", "check")
        return VerifyReport(
            name.replace("check_", "verify-"),
            {"args": repr(args)},
            "error",
            lhs=repr(exc),
        )


def run_grid(jobs, nworkers=1):
    """Run (fn, args, kwargs) jobs, preserving order; nworkers > 1 forks."""
    jobs = list(jobs)
    if nworkers <= 1 or len(jobs) <= 1:
        return [_call(j) for j in jobs]
    with Pool(nworkers) as pool:
        return list(pool.imap(_call, jobs, chunksize=1))


def exit_code(reports):
    if any(r.status in ("fail", "error") for r in reports):
        return 1
    return 0
