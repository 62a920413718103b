"""Exact Laurent polynomials and rational functions in q over the integers.

QPoly stores a Laurent polynomial as ``{exponent: coefficient}`` with
arbitrary-precision integer coefficients and no stored zeros.  QRat is a
canonically reduced ratio of two QPoly values.  Every operation is exact;
there is no floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ._core import qp_add, qp_mul, qp_mul_mono


class QPoly:
    """Laurent polynomial in q with integer coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            self.c = {}
        else:
            self.c = {e: v for e, v in coeffs.items() if v}

    # -- constructors ------------------------------------------------------

    @classmethod
    def _raw(cls, c):
        p = cls.__new__(cls)
        p.c = c
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({0: 1})

    @classmethod
    def term(cls, coeff, exponent=0):
        """The monomial coeff * q^exponent."""
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def q(cls):
        return cls._raw({1: 1})

    # -- ring structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly.term(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = QPoly.term(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return QPoly._raw(qp_add(self.c, other.c))

    __radd__ = __add__

    def __neg__(self):
        return QPoly._raw({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = QPoly.term(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QPoly._raw(qp_mul_mono(self.c, 0, other))
        if not isinstance(other, QPoly):
            return NotImplemented
        return QPoly._raw(qp_mul(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a QPoly")
        out = QPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def shift(self, s):
        """Multiply by q^s."""
        if not s or not self.c:
            return self
        return QPoly._raw({e + s: v for e, v in self.c.items()})

    def min_exp(self):
        if not self.c:
            raise ValueError("zero polynomial has no exponents")
        return min(self.c)

    def max_exp(self):
        if not self.c:
            raise ValueError("zero polynomial has no exponents")
        return max(self.c)

    def coeff(self, e):
        return self.c.get(e, 0)

    def is_monomial(self):
        return len(self.c) == 1

    def eval(self, q0):
        """Exact value at q = q0 (a Fraction or int, nonzero if any negative
        exponent is present)."""
        if not self.c:
            return Fraction(0) if isinstance(q0, Fraction) else 0
        if q0 == 0 and min(self.c) < 0:
            raise ZeroDivisionError("negative q-exponent evaluated at q0 = 0")
        tot = 0
        for e, v in self.c.items():
            tot += v * q0**e
        return tot

    # -- text --------------------------------------------------------------

    def __str__(self):
        if not self.c:
            return "0"
        bits = []
        for e in sorted(self.c):
            v = self.c[e]
            sign = "-" if v < 0 else "+"
            av = abs(v)
            if e == 0:
                body = str(av)
            else:
                var = "q" if e == 1 else "q^%d" % e
                body = var if av == 1 else "%d*%s" % (av, var)
            bits.append((sign, body))
        first_sign, first_body = bits[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in bits[1:]:
            out += " %s %s" % (sign, body)
        return out

    def __repr__(self):
        return "QPoly(%s)" % self


def qpoly_mul(p: QPoly, r: QPoly) -> QPoly:
    """Exact product of two Laurent polynomials in q."""
    return p * r


def qpoly_eval(p: QPoly, q0) -> Fraction:
    """Exact value of p at q = q0."""
    v = p.eval(Fraction(q0))
    return Fraction(v)


# ---------------------------------------------------------------------------
# dense helpers for gcd/division on the polynomial parts


def _to_dense(c):
    """Dict with min exponent 0 -> coefficient list, constant term first."""
    deg = max(c)
    out = [0] * (deg + 1)
    for e, v in c.items():
        out[e] = v
    return out


def _from_dense(lst):
    return {e: v for e, v in enumerate(lst) if v}


def _dense_divmod_exact(num, den):
    """Exact division of dense integer coefficient lists, or None."""
    num = list(num)
    dn = len(den) - 1
    lead = den[dn]
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            return None
        out[i - dn] = q
        for j in range(dn + 1):
            num[i - dn + j] -= q * den[j]
    if any(num[:dn] if dn else []):
        return None
    return out


def _content(lst):
    g = 0
    for v in lst:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g or 1


def _primitive(lst):
    g = _content(lst)
    if g > 1:
        return [v // g for v in lst]
    return list(lst)


def _dense_gcd(a, b):
    """GCD of two dense integer polynomials, primitive, via primitive PRS."""
    a = _primitive(a)
    b = _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b and any(b):
        # pseudo-remainder of a by b
        dn = len(b) - 1
        lead = b[dn]
        r = list(a)
        for i in range(len(r) - 1, dn - 1, -1):
            if r[i] == 0:
                continue
            # scale so the division is integral
            c = r[i]
            for j in range(len(r)):
                r[j] *= lead
            for j in range(dn + 1):
                r[i - dn + j] -= c * b[j]
        while r and r[-1] == 0:
            r.pop()
        a, b = b, _primitive(r) if r else []
    return a


class QRat:
    """Canonical ratio num/den of Laurent polynomials in q.

    Canonical form: den is a true polynomial with nonzero positive constant
    coefficient, and the polynomial parts of num and den are coprime.  Any
    pure q-power is carried by num, so equality is structural comparison.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = QPoly.term(num)
        if den is None:
            den = QPoly.one()
        elif isinstance(den, int):
            den = QPoly.term(den)
        n, d = _normalize(num, den)
        self.num = n
        self.den = d

    @classmethod
    def _raw(cls, num, den):
        r = cls.__new__(cls)
        r.num = num
        r.den = den
        return r

    @classmethod
    def zero(cls):
        return cls._raw(QPoly.zero(), QPoly.one())

    @classmethod
    def one(cls):
        return cls._raw(QPoly.one(), QPoly.one())

    @classmethod
    def from_poly(cls, p):
        return cls._raw(p, QPoly.one())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, QPoly)):
            other = QRat(other if isinstance(other, QPoly) else QPoly.term(other))
        if not isinstance(other, QRat):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _as_qrat(other)
        if other is NotImplemented:
            return NotImplemented
        return QRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QRat._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _as_qrat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_qrat(other)
        if other is NotImplemented:
            return NotImplemented
        return QRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_qrat(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero QRat")
        return QRat(self.num * other.den, self.den * other.num)

    def is_polynomial(self):
        return self.den == QPoly.one()

    def eval(self, q0):
        """Exact value at q = q0 (q0 must not be a zero of den)."""
        q0 = Fraction(q0)
        d = self.den.eval(q0)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at q0")
        return Fraction(self.num.eval(q0)) / d

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)

    def __repr__(self):
        return "QRat(%s)" % self


def _as_qrat(x):
    if isinstance(x, QRat):
        return x
    if isinstance(x, QPoly):
        return QRat.from_poly(x)
    if isinstance(x, int):
        return QRat._raw(QPoly.term(x), QPoly.one())
    return NotImplemented


def _normalize(num: QPoly, den: QPoly):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return QPoly.zero(), QPoly.one()
    # strip q-powers: den becomes a polynomial with nonzero constant term
    tn = num.min_exp()
    td = den.min_exp()
    shift = tn - td
    np = num.shift(-tn).c
    dp = den.shift(-td).c
    if dp == {0: 1}:
        return QPoly._raw(np).shift(shift), QPoly.one()
    nd = _to_dense(np)
    dd = _to_dense(dp)
    q = _dense_divmod_exact(nd, dd)
    if q is not None:
        np = _from_dense(q)
        dp = {0: 1}
    else:
        g = _dense_gcd(nd, dd)
        if len(g) > 1:
            nd = _dense_divmod_exact(nd, g)
            dd = _dense_divmod_exact(dd, g)
            np = _from_dense(nd)
            dp = _from_dense(dd)
        # shared integer content
        cg = 0
        for v in np.values():
            cg = gcd(cg, v)
        for v in dp.values():
            cg = gcd(cg, v)
        if cg > 1:
            np = {e: v // cg for e, v in np.items()}
            dp = {e: v // cg for e, v in dp.items()}
    if dp.get(0, 0) < 0:
        np = {e: -v for e, v in np.items()}
        dp = {e: -v for e, v in dp.items()}
    return QPoly._raw(np).shift(shift), QPoly._raw(dp)


def qrat_normalize(num: QPoly, den: QPoly) -> QRat:
    """Canonical QRat for num/den; idempotent."""
    return QRat(num, den)
