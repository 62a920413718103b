# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of qmorris._pure: identical signatures and semantics.

Coefficients stay Python objects (arbitrary-precision ints, Fractions or
q-dicts); the win comes from running the sparse-product bookkeeping, the
pruning checks and the classifier sweep in C.
"""

from array import array

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_GET_ITEM, PyTuple_SET_ITEM

cimport cython

EARLY_SMALL = 0
CLOSE_PAIR = 1
EXCEPTIONAL = 2

DEF MAXVARS = 64


def qp_add(dict a, dict b):
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef object e, c, s
    for e, c in b.items():
        s = out.get(e)
        if s is None:
            out[e] = c
        else:
            s = s + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def qp_mul(dict a, dict b):
    if not a or not b:
        return {}
    if len(b) > len(a):
        a, b = b, a
    cdef dict out = {}
    cdef object ea, eb, ca, cb, e, s, prod
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = ea + eb
            prod = ca * cb
            s = out.get(e)
            if s is None:
                out[e] = prod
            else:
                s = s + prod
                if s:
                    out[e] = s
                else:
                    del out[e]
    return out


def qp_mul_mono(dict a, s, c):
    if not a or c == 0:
        return {}
    cdef dict out = {}
    cdef object e, co
    for e, co in a.items():
        out[e + s] = co * c
    return out


cdef inline tuple _tup_add(tuple e, tuple d):
    cdef Py_ssize_t n = len(e)
    cdef Py_ssize_t v
    cdef tuple out = PyTuple_New(n)
    cdef object val
    for v in range(n):
        val = (<object>PyTuple_GET_ITEM(e, v)) + (<object>PyTuple_GET_ITEM(d, v))
        Py_INCREF(val)
        PyTuple_SET_ITEM(out, v, val)
    return out


cdef inline object _cmul(object ca, object cb, bint scalar):
    if scalar:
        return ca * cb
    return qp_mul(<dict>ca, <dict>cb)


cdef inline void _accum(dict out, tuple e, object add, bint scalar):
    cdef object prev = out.get(e)
    cdef object s
    if prev is None:
        if add:
            out[e] = add
        return
    if scalar:
        s = prev + add
    else:
        s = qp_add(<dict>prev, <dict>add)
    if s:
        out[e] = s
    else:
        del out[e]


def ml_mul(dict A, dict B, bint scalar):
    if not A or not B:
        return {}
    if len(B) > len(A):
        A, B = B, A
    cdef dict out = {}
    cdef object ea, eb, ca, cb
    for eb, cb in B.items():
        for ea, ca in A.items():
            _accum(out, _tup_add(<tuple>ea, <tuple>eb), _cmul(ca, cb, scalar), scalar)
    return out


def expand_product(list factors, dict pre_terms, bint scalar):
    cdef dict terms = dict(pre_terms)
    cdef dict out
    cdef object evec, c, e, ce
    for evec, c in factors:
        out = dict(terms)
        for e, ce in terms.items():
            _accum(out, _tup_add(<tuple>e, <tuple>evec), _cmul(ce, c, scalar), scalar)
        terms = out
    return terms


def expand_coeff(list factors, dict pre_terms, int nvars, tuple target, bint scalar):
    """Coefficient of x^target in pre_terms * prod(1 + c*x^evec), pruned."""
    cdef Py_ssize_t nf = len(factors)
    cdef Py_ssize_t idx, v
    if nvars > MAXVARS:
        raise ValueError("too many variables")
    # flattened factor exponents and suffix reachability bounds
    fexp_arr = array("l", [0]) * (nf * nvars if nf else 1)
    lo_arr = array("l", [0]) * ((nf + 1) * nvars)
    hi_arr = array("l", [0]) * ((nf + 1) * nvars)
    cdef long[::1] fe = fexp_arr
    cdef long[::1] lo = lo_arr
    cdef long[::1] hi = hi_arr
    cdef tuple evec
    cdef tuple fpair
    cdef long ev
    for idx in range(nf):
        fpair = <tuple>factors[idx]
        evec = <tuple>fpair[0]
        for v in range(nvars):
            fe[idx * nvars + v] = <long>(<object>PyTuple_GET_ITEM(evec, v))
    for idx in range(nf - 1, -1, -1):
        for v in range(nvars):
            ev = fe[idx * nvars + v]
            lo[idx * nvars + v] = lo[(idx + 1) * nvars + v] + (ev if ev < 0 else 0)
            hi[idx * nvars + v] = hi[(idx + 1) * nvars + v] + (ev if ev > 0 else 0)
    cdef long tgt[MAXVARS]
    for v in range(nvars):
        tgt[v] = <long>(<object>PyTuple_GET_ITEM(target, v))
    cdef long ebuf[MAXVARS]
    cdef long d
    cdef bint ok
    cdef dict terms = {}
    cdef object e, ce, cfac
    for e, ce in pre_terms.items():
        ok = True
        for v in range(nvars):
            d = tgt[v] - <long>(<object>PyTuple_GET_ITEM(<tuple>e, v))
            if d < lo[v] or d > hi[v]:
                ok = False
                break
        if ok:
            _accum(terms, <tuple>e, ce, scalar)
    cdef dict nxt
    cdef Py_ssize_t base
    cdef tuple e2
    for idx in range(nf):
        fpair = <tuple>factors[idx]
        evec = <tuple>fpair[0]
        cfac = fpair[1]
        base = (idx + 1) * nvars
        nxt = {}
        for e, ce in terms.items():
            for v in range(nvars):
                ebuf[v] = <long>(<object>PyTuple_GET_ITEM(<tuple>e, v))
            # keep branch
            ok = True
            for v in range(nvars):
                d = tgt[v] - ebuf[v]
                if d < lo[base + v] or d > hi[base + v]:
                    ok = False
                    break
            if ok:
                _accum(nxt, <tuple>e, ce, scalar)
            # take branch
            ok = True
            for v in range(nvars):
                d = tgt[v] - ebuf[v] - fe[idx * nvars + v]
                if d < lo[base + v] or d > hi[base + v]:
                    ok = False
                    break
            if ok:
                e2 = _tup_add(<tuple>e, evec)
                _accum(nxt, e2, _cmul(ce, cfac, scalar), scalar)
        terms = nxt
    res = terms.get(target)
    if res is None:
        return 0 if scalar else {}
    return res


def classify_block(int kparam, int b, int s):
    """Packed verdicts for all tuples in [0, (s-1)k+b+1]^s, odometer order."""
    cdef long top = (s - 1) * kparam + b + 1
    cdef long width = top + 1
    cdef long total = 1
    cdef int i, j, pos
    for i in range(s):
        total *= width
    out_arr = array("I", [0]) * total
    cdef unsigned int[::1] out = out_arr
    cdef long tup[MAXVARS]
    if s > MAXVARS:
        raise ValueError("s too large")
    for i in range(s):
        tup[i] = 0
    cdef long idx, d
    cdef unsigned int code
    cdef bint done
    for idx in range(total):
        code = 0
        done = False
        for i in range(s):
            if tup[i] <= b:
                code = (EARLY_SMALL << 16) | ((i + 1) << 8)
                done = True
                break
        if not done:
            for i in range(s - 1):
                for j in range(i + 1, s):
                    d = tup[j] - tup[i]
                    if 1 - kparam <= d <= kparam:
                        code = (CLOSE_PAIR << 16) | ((i + 1) << 8) | (j + 1)
                        done = True
                        break
                if done:
                    break
        if not done:
            for i in range(s):
                if tup[i] != (s - 1 - i) * kparam + b + 1:
                    raise AssertionError(
                        "tuple escapes every case but is not the threshold tuple"
                    )
            code = EXCEPTIONAL << 16
        out[idx] = code
        for pos in range(s - 1, -1, -1):
            if tup[pos] != top:
                tup[pos] += 1
                break
            tup[pos] = 0
    return out_arr
