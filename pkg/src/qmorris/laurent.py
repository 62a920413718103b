"""Sparse multivariate Laurent polynomials in x0..xn over QPoly.

A term map associates an exponent vector (a tuple of signed integers, one per
variable) with a nonzero QPoly coefficient.  Constant-term extraction,
per-variable constant terms and monomial substitution are the operations the
identity checks are built from.
"""

from __future__ import annotations

from ._core import expand_product, ml_mul
from .exact_arith import QPoly

ExponentVector = tuple


def zero_vec(nvars: int) -> tuple:
    return (0,) * nvars


def unit_vec(nvars: int, i: int, e: int = 1) -> tuple:
    v = [0] * nvars
    v[i] = e
    return tuple(v)


def evec_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def evec_neg(a: tuple) -> tuple:
    return tuple(-x for x in a)


def monomial_str(evec: tuple) -> str:
    """Canonical text form, e.g. "x0^-2*x1^2"; "1" for the empty monomial."""
    bits = []
    for i, e in enumerate(evec):
        if e == 0:
            continue
        bits.append("x%d" % i if e == 1 else "x%d^%d" % (i, e))
    return "*".join(bits) if bits else "1"


class MultiLaurent:
    """Sparse Laurent polynomial in nvars variables with QPoly coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent vector length mismatch")
                if not isinstance(c, QPoly):
                    c = QPoly.term(c) if isinstance(c, int) else QPoly(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms):
        f = cls.__new__(cls)
        f.nvars = nvars
        f.terms = terms
        return f

    @classmethod
    def constant(cls, nvars, coeff):
        if isinstance(coeff, int):
            coeff = QPoly.term(coeff)
        if not coeff:
            return cls._raw(nvars, {})
        return cls._raw(nvars, {zero_vec(nvars): coeff})

    @classmethod
    def monomial(cls, nvars, evec, coeff=None):
        coeff = QPoly.one() if coeff is None else coeff
        return cls(nvars, {tuple(evec): coeff})

    # -- ring structure ----------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch: %d vs %d" % (self.nvars, other.nvars))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        return self.nvars == other.nvars and self._cdicts() == other._cdicts()

    def _cdicts(self):
        return {e: c.c for e, c in self.terms.items()}

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return MultiLaurent._raw(self.nvars, out)

    def __neg__(self):
        return MultiLaurent._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, QPoly)):
            if isinstance(other, int):
                other = QPoly.term(other)
            if not other:
                return MultiLaurent._raw(self.nvars, {})
            return MultiLaurent._raw(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        self._check(other)
        raw = ml_mul(self._cdicts(), other._cdicts(), False)
        return MultiLaurent._raw(
            self.nvars, {e: QPoly._raw(c) for e, c in raw.items()}
        )

    __rmul__ = __mul__

    # -- extraction --------------------------------------------------------

    def coeff(self, alpha) -> QPoly:
        """QPoly coefficient of x^alpha (zero if absent)."""
        alpha = tuple(alpha)
        if len(alpha) != self.nvars:
            raise ValueError("exponent vector length mismatch")
        c = self.terms.get(alpha)
        return c if c is not None else QPoly.zero()

    def ct_var(self, i) -> "MultiLaurent":
        """Sum of the terms free of x_i."""
        if not 0 <= i < self.nvars:
            raise IndexError("variable index out of range")
        return MultiLaurent._raw(
            self.nvars, {e: c for e, c in self.terms.items() if e[i] == 0}
        )

    def ct_all(self) -> QPoly:
        """Iterated constant term over all variables, in ascending order."""
        cur = self
        for i in range(self.nvars):
            cur = cur.ct_var(i)
        return cur.coeff(zero_vec(self.nvars))

    def subst(self, i, j, s) -> "MultiLaurent":
        """Substitute x_i -> x_j * q^s (i == j rescales x_i by q^s)."""
        if not 0 <= i < self.nvars or not 0 <= j < self.nvars:
            raise IndexError("variable index out of range")
        out = {}
        for e, c in self.terms.items():
            ei = e[i]
            if ei:
                c = c.shift(s * ei)
                le = list(e)
                le[i] = 0
                le[j] += ei
                e = tuple(le)
            prev = out.get(e)
            tot = c if prev is None else prev + c
            if tot:
                out[e] = tot
            elif e in out:
                del out[e]
        return MultiLaurent._raw(self.nvars, out)

    # -- inspection --------------------------------------------------------

    def total_degrees(self):
        return {sum(e) for e in self.terms}

    def is_homogeneous_zero(self):
        """True if every term has total degree 0 (kernels built from
        degree-0 factors must satisfy this)."""
        return all(sum(e) == 0 for e in self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = str(c)
            if len(c.c) > 1 or (cs.startswith("-") and e != zero_vec(self.nvars)):
                cs = "(%s)" % cs
            m = monomial_str(e)
            bits.append(cs if m == "1" else ("%s*%s" % (cs, m) if cs != "1" else m))
        return " + ".join(bits)

    def __repr__(self):
        return "MultiLaurent(%d, %s)" % (self.nvars, self)


def product_of_factors(nvars, factors, scalar=False, pre_terms=None):
    """Expand prod (1 + c*x^e) over factor pairs (evec, coeff-dict/scalar).

    Returns a raw term map in the requested mode.
    """
    if pre_terms is None:
        pre_terms = {zero_vec(nvars): (1 if scalar else {0: 1})}
    return expand_product(factors, pre_terms, scalar)


def ml_mul_op(f: MultiLaurent, g: MultiLaurent) -> MultiLaurent:
    """Exact product (spec operation surface)."""
    return f * g


def ml_coeff(f: MultiLaurent, alpha) -> QPoly:
    return f.coeff(alpha)


def ml_ct_var(f: MultiLaurent, i) -> MultiLaurent:
    return f.ct_var(i)


def ml_subst(f: MultiLaurent, i, j, s) -> MultiLaurent:
    return f.subst(i, j, s)
