"""Right-hand sides and auxiliary q-combinatorics.

q-factorials, Gaussian binomials (extended to negative tops), the Dyson
multinomial, the q-Dyson product, both forms of the q-Morris closed form
M_n(a,b,k,m,l;q), the vanishing sets D1/D2/D3, and the boundary summation
identity.  Everything returns exact QPoly/QRat values.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .exact_arith import QPoly, QRat
from .laurent import MultiLaurent


@dataclass(frozen=True)
class ParamSet:
    """Parameter tuple (n, a, b, m, l, k) with an optional q specialization."""

    n: int
    a: int
    b: int
    m: int
    l: int
    k: int
    q0: Optional[Fraction] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (0 <= self.m <= self.n and 0 <= self.l <= self.n):
            raise ValueError("m and l must lie in [0, n]")
        if self.b < 0 or self.k < 0:
            raise ValueError("b and k must be nonnegative")

    @property
    def degree_bound(self):
        """Degree of the constant term as a polynomial in q^a: n*b + m + l."""
        return self.n * self.b + self.m + self.l

    @property
    def extra_point(self):
        """The pinning evaluation point h = (n-l-1)k + b + 1."""
        return (self.n - self.l - 1) * self.k + self.b + 1


def q_factorial(mm: int) -> QPoly:
    """(q)_mm = prod_{i=1..mm} (1 - q^i)."""
    if mm < 0:
        raise ValueError("negative q-factorial index")
    out = QPoly.one()
    for i in range(1, mm + 1):
        out = out * QPoly({0: 1, i: -1})
    return out


def _poch_ratio(num_idx, den_idx, qshift=0, sign=1) -> QRat:
    """QRat for sign * q^qshift * prod(1-q^i, i in num) / prod(1-q^j, j in den).

    Indices may repeat (Counter semantics) and may be negative; zero indices
    make the corresponding side vanish.  Cancels index-wise first, then
    divides out the remaining denominator factors exactly.
    """
    num = Counter()
    den = Counter()
    for idx, cnt in Counter(num_idx).items():
        num[idx] += cnt
    for idx, cnt in Counter(den_idx).items():
        den[idx] += cnt
    common = num & den
    num -= common
    den -= common
    # normalize negative indices: 1 - q^-t = -q^-t (1 - q^t)
    for side, flip in ((num, 1), (den, -1)):
        for idx in [i for i in side if i < 0]:
            cnt = side.pop(idx)
            side[-idx] += cnt
            qshift += flip * idx * cnt
            if cnt % 2:
                sign = -sign
    if 0 in den:
        raise ZeroDivisionError("vanishing factor in denominator")
    if 0 in num:
        return QRat.zero()
    again = num & den
    num -= again
    den -= again
    npoly = QPoly.term(sign, qshift)
    for idx, cnt in num.items():
        npoly = npoly * QPoly({0: 1, idx: -1}) ** cnt
    dpoly = QPoly.one()
    for idx, cnt in den.items():
        dpoly = dpoly * QPoly({0: 1, idx: -1}) ** cnt
    return QRat(npoly, dpoly)


def gauss_binom(N: int, kk: int) -> QRat:
    """Gaussian binomial via prod_{i=1..kk} (1-q^{N-i+1})/(1-q^i).

    Defined for every integer N; a polynomial whenever N >= kk >= 0 and zero
    when 0 <= N < kk.
    """
    if kk < 0:
        raise ValueError("lower index must be nonnegative")
    return _poch_ratio([N - i + 1 for i in range(1, kk + 1)], range(1, kk + 1))


def qbinomial_theorem_finite(N: int) -> bool:
    """Check (u)_N = sum_k q^{k(k-1)/2} qbinom(N,k) (-u)^k symbolically in u."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    lhs = MultiLaurent.constant(1, 1)
    for t in range(N):
        lhs = lhs * MultiLaurent(1, {(0,): QPoly.one(), (1,): QPoly.term(-1, t)})
    terms = {}
    for kk in range(N + 1):
        g = gauss_binom(N, kk)
        if not g.is_polynomial():
            return False
        c = g.num.shift(kk * (kk - 1) // 2)
        if kk % 2:
            c = -c
        if c:
            terms[(kk,)] = c
    return lhs == MultiLaurent(1, terms)


def dyson_rhs(a) -> int:
    """Multinomial (sum a_i)! / prod a_i!."""
    a = tuple(a)
    if any(v < 0 for v in a):
        raise ValueError("exponents must be nonnegative")
    out = 1
    total = 0
    for v in a:
        total += v
        out *= comb(total, v)
    return out


def qdyson_rhs(a) -> QRat:
    """(q)_{sum a} / prod (q)_{a_i}."""
    a = tuple(a)
    if any(v < 0 for v in a):
        raise ValueError("exponents must be nonnegative")
    num = list(range(1, sum(a) + 1))
    den = []
    for v in a:
        den.extend(range(1, v + 1))
    return _poch_ratio(num, den)


def _chi(cond) -> int:
    return 1 if cond else 0


def morris_rhs(p: ParamSet, form="factorial") -> QRat:
    """The closed form M_n(a,b,k,m,l;q).

    form="factorial": the ratio of q-factorials, defined for a >= 1 when
    m >= 1 (a >= 0 otherwise).  form="rewritten": the product form that
    extends M_n to every integer a.  Both agree on the common domain.
    """
    if form == "factorial":
        return _morris_factorial(p)
    if form == "rewritten":
        return _morris_rewritten(p)
    raise ValueError("unknown form %r" % form)


def _bshift(n, m, l, i):
    # The a-free denominator index grows once past n-m-l and once more past
    # 2n-m-l; the second step only fires when m+l exceeds n.  With a single
    # step the closed form would contradict its own m=n and l=n reductions.
    return _chi(i >= n - m - l) + _chi(i >= 2 * n - m - l)


def _morris_factorial(p: ParamSet) -> QRat:
    n, a, b, m, l, k = p.n, p.a, p.b, p.m, p.l, p.k
    if a < (1 if m >= 1 else 0):
        raise ValueError("factorial form needs a >= 1 when m >= 1")
    num = []
    den = []
    for i in range(n):
        num.extend(range(1, a + b + i * k + _chi(i >= n - l) + 1))
        num.extend(range(1, (i + 1) * k + 1))
        den.extend(range(1, a + i * k - _chi(i < m) + 1))
        den.extend(range(1, b + i * k + _bshift(n, m, l, i) + 1))
        den.extend(range(1, k + 1))
    return _poch_ratio(num, den)


def _morris_rewritten(p: ParamSet) -> QRat:
    n, a, b, m, l, k = p.n, p.a, p.b, p.m, p.l, p.k
    num = list(range(1, n * k + 1))
    den = list(range(1, k + 1)) * n
    extra = []
    for i in range(m):
        extra.append(a + i * k)
    for i in range(n - l, n):
        extra.append(a + i * k + b + 1)
    for i in range(n):
        extra.extend(a + i * k + j for j in range(1, b + 1))
        num.extend(range(1, i * k + 1))
        den.extend(range(1, b + i * k + _bshift(n, m, l, i) + 1))
    return _poch_ratio(num + extra, den)


def morris_rewritten_at(p: ParamSet, a: int, q0) -> Fraction:
    """Exact value of the rewritten form at integer a and q = q0."""
    n, b, m, l, k = p.n, p.b, p.m, p.l, p.k
    q0 = Fraction(q0)

    def poch(j):
        out = Fraction(1)
        for i in range(1, j + 1):
            out *= 1 - q0**i
        return out

    val = poch(n * k) / poch(k) ** n
    for i in range(m):
        val *= 1 - q0 ** (a + i * k)
    for i in range(n - l, n):
        val *= 1 - q0 ** (a + i * k + b + 1)
    for i in range(n):
        for j in range(1, b + 1):
            val *= 1 - q0 ** (a + i * k + j)
        val *= poch(i * k) / poch(b + i * k + _bshift(n, m, l, i))
    return val


def vanishing_sets(p: ParamSet):
    """The root sets (D1, D2, D3) of the polynomial in q^a.

    D1 has m elements, D2 has l, D3 has n*b; all n*b+m+l values are pairwise
    distinct whenever k > b+1.
    """
    n, b, m, l, k = p.n, p.b, p.m, p.l, p.k
    if not (0 <= m < n and 0 <= l < n):
        raise ValueError("need 0 <= m, l < n")
    d1 = sorted(i * k for i in range(m))
    d2 = sorted((n - l + i) * k + b + 1 for i in range(l))
    d3 = sorted(i * k + j for i in range(n) for j in range(1, b + 1))
    return d1, d2, d3


def vanishing_points_distinct(p: ParamSet) -> bool:
    d1, d2, d3 = vanishing_sets(p)
    allpts = d1 + d2 + d3
    return len(set(allpts)) == len(allpts)


def prop52_lhs(n: int, b: int, k: int) -> QRat:
    """sum_t (-1)^t q^{(n-1)kt + (b+1)t + t(t+1)/2} / ((q)_{k-t-b-1} (q)_t)."""
    if not k >= b + 1 >= 1:
        raise ValueError("need k >= b+1 >= 1")
    total = QRat.zero()
    for t in range(k - b):
        e = (n - 1) * k * t + (b + 1) * t + t * (t + 1) // 2
        sign = -1 if t % 2 else 1
        den = list(range(1, k - t - b)) + list(range(1, t + 1))
        total = total + _poch_ratio([], den, qshift=e, sign=sign)
    return total


def prop52_rhs(n: int, b: int, k: int) -> QRat:
    """The Gaussian binomial (nk choose k-b-1)."""
    if not k >= b + 1 >= 1:
        raise ValueError("need k >= b+1 >= 1")
    return gauss_binom(n * k, k - b - 1)
