"""Pure-Python implementations of the hot kernels.

This module is the reference backend.  ``qmorris._speedups`` is a compiled
twin with identical signatures and semantics; ``qmorris._core`` picks one at
import time.  Everything here works on plain data so both backends stay
trivially interchangeable:

* a univariate Laurent polynomial in q is a dict ``{exponent: int}`` with no
  zero values (the zero polynomial is ``{}``),
* a sparse multivariate Laurent term map is a dict ``{exponent_tuple: coeff}``,
* a coefficient is either such a q-dict ("poly mode") or an exact scalar
  (int / Fraction, "scalar mode").

The expansion routines multiply out products of two-term factors
``1 + c * x^e``; that loop dominates the run time of every constant-term
computation in the package.
"""

from array import array


# ---------------------------------------------------------------------------
# q-polynomial dicts


def qp_add(a, b):
    """Sum of two q-dicts."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def qp_mul(a, b):
    """Product of two q-dicts."""
    if not a or not b:
        return {}
    if len(b) > len(a):
        a, b = b, a
    out = {}
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def qp_mul_mono(a, s, c):
    """q-dict times the monomial c*q^s."""
    if not a or c == 0:
        return {}
    return {e + s: co * c for e, co in a.items()}


# ---------------------------------------------------------------------------
# sparse multivariate term maps


def _coeff_mul(ca, cb, scalar):
    return ca * cb if scalar else qp_mul(ca, cb)


def ml_mul(A, B, scalar):
    """Product of two term maps.  Coefficients are scalars or q-dicts."""
    if not A or not B:
        return {}
    if len(B) > len(A):
        A, B = B, A
    out = {}
    if scalar:
        for eb, cb in B.items():
            for ea, ca in A.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, 0) + ca * cb
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
    else:
        for eb, cb in B.items():
            for ea, ca in A.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = qp_mul(ca, cb)
                prev = out.get(e)
                s = qp_add(prev, prod) if prev is not None else prod
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
    return out


def expand_product(factors, pre_terms, scalar):
    """Multiply ``pre_terms`` by every factor ``(evec, c)`` = 1 + c*x^evec.

    No pruning; returns the full term map.
    """
    terms = dict(pre_terms)
    for evec, c in factors:
        out = dict(terms)
        for e, ce in terms.items():
            e2 = tuple(x + y for x, y in zip(e, evec))
            add = _coeff_mul(ce, c, scalar)
            prev = out.get(e2)
            if prev is None:
                if add:
                    out[e2] = add
            else:
                s = prev + add if scalar else qp_add(prev, add)
                if s:
                    out[e2] = s
                else:
                    del out[e2]
        terms = out
    return terms


def expand_coeff(factors, pre_terms, nvars, target, scalar):
    """Coefficient of x^target in ``pre_terms * prod(1 + c*x^evec)``.

    Terms that provably cannot reach ``target`` given the exponent ranges of
    the remaining factors are dropped as soon as that is certain, which keeps
    the live set small.  Returns a single coefficient (0 / {} when absent).
    """
    nf = len(factors)
    # suffix exponent ranges: after factor idx, coordinate v can still move
    # within [lo[idx][v], hi[idx][v]]
    lo = [(0,) * nvars] * (nf + 1)
    hi = [(0,) * nvars] * (nf + 1)
    llo = [0] * nvars
    lhi = [0] * nvars
    for idx in range(nf - 1, -1, -1):
        evec = factors[idx][0]
        for v in range(nvars):
            ev = evec[v]
            if ev < 0:
                llo[v] += ev
            elif ev > 0:
                lhi[v] += ev
        lo[idx] = tuple(llo)
        hi[idx] = tuple(lhi)

    def alive_after(e, idx):
        l = lo[idx]
        h = hi[idx]
        for v in range(nvars):
            d = target[v] - e[v]
            if d < l[v] or d > h[v]:
                return False
        return True

    terms = {e: c for e, c in pre_terms.items() if alive_after(e, 0)}
    for idx in range(nf):
        evec, c = factors[idx]
        nxt = {}
        j = idx + 1
        for e, ce in terms.items():
            if alive_after(e, j):
                prev = nxt.get(e)
                if prev is None:
                    nxt[e] = ce
                else:
                    s = prev + ce if scalar else qp_add(prev, ce)
                    if s:
                        nxt[e] = s
                    else:
                        del nxt[e]
            e2 = tuple(x + y for x, y in zip(e, evec))
            if alive_after(e2, j):
                add = _coeff_mul(ce, c, scalar)
                prev = nxt.get(e2)
                if prev is None:
                    if add:
                        nxt[e2] = add
                else:
                    s = prev + add if scalar else qp_add(prev, add)
                    if s:
                        nxt[e2] = s
                    else:
                        del nxt[e2]
        terms = nxt
    res = terms.get(target)
    if res is None:
        return 0 if scalar else {}
    return res


# ---------------------------------------------------------------------------
# gap/threshold classifier used by the residue recursion

EARLY_SMALL = 0
CLOSE_PAIR = 1
EXCEPTIONAL = 2


def classify_block(kparam, b, s):
    """Classify every s-tuple with entries in [0, (s-1)*kparam+b+1].

    Tuples are enumerated in odometer order (last coordinate fastest).  Each
    verdict is packed as ``kind << 16 | i << 8 | j`` with 1-based positions
    (0 when unused).  Returns an ``array('I')`` of length (top+1)**s.
    """
    top = (s - 1) * kparam + b + 1
    out = array("I")
    tup = [0] * s
    width = top + 1
    total = width**s
    for _ in range(total):
        code = _classify_one(kparam, b, s, tup)
        out.append(code)
        for pos in range(s - 1, -1, -1):
            if tup[pos] != top:
                tup[pos] += 1
                break
            tup[pos] = 0
    return out


def _classify_one(kparam, b, s, tup):
    for i in range(s):
        if tup[i] <= b:
            return (EARLY_SMALL << 16) | ((i + 1) << 8)
    for i in range(s - 1):
        ti = tup[i]
        for j in range(i + 1, s):
            d = tup[j] - ti
            if 1 - kparam <= d <= kparam:
                return (CLOSE_PAIR << 16) | ((i + 1) << 8) | (j + 1)
    for i in range(s):
        if tup[i] != (s - 1 - i) * kparam + b + 1:
            raise AssertionError(
                "tuple %r escapes every case but is not the threshold tuple"
                % (tuple(tup),)
            )
    return EXCEPTIONAL << 16
