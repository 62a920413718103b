"""Structured (unexpanded) products of atomic factors 1 - q^s * x^e.

The identity kernels, the boundary rational functions Q(h) and their chain
images Q(h | r; k) all live here as FactorProduct values: a QRat prefactor, a
single signed monomial, and numerator/denominator multisets of atomic
factors.  Zero detection, cancellation and substitution act on the factor
structure; expansion to a MultiLaurent happens only when a value is actually
needed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from ._core import expand_product
from .exact_arith import QPoly, QRat
from .laurent import MultiLaurent, evec_add, monomial_str, unit_vec, zero_vec


class NotPolynomial(ValueError):
    """Raised when an operation needs an empty denominator but factors remain."""


class DuplicateFactor(ValueError):
    """Raised when repeated denominator factors would defeat partial fractions."""


class MalformedChain(ValueError):
    """Raised when a chain refers to a denominator factor that does not exist."""


class AtomicFactor(NamedTuple):
    """The factor 1 - q^qexp * x^mono."""

    qexp: int
    mono: tuple

    def is_zero_factor(self):
        return self.qexp == 0 and not any(self.mono)

    def is_pure_q(self):
        return not any(self.mono)

    def as_qpoly(self) -> QPoly:
        if not self.is_pure_q():
            raise ValueError("factor involves x variables")
        return QPoly({0: 1, self.qexp: -1} if self.qexp else {0: 0})

    def __str__(self):
        m = monomial_str(self.mono)
        if m == "1":
            body = "q^%d" % self.qexp if self.qexp != 1 else "q"
            if self.qexp == 0:
                body = "1"
        else:
            body = m if self.qexp == 0 else ("q^%d*%s" % (self.qexp, m) if self.qexp != 1 else "q*%s" % m)
        return "1 - %s" % body


def pochhammer(qshift: int, mono: tuple, length: int):
    """Factors of the q-shifted product (q^qshift * x^mono ; q)_length."""
    if length < 0:
        raise ValueError("negative Pochhammer length")
    return [AtomicFactor(qshift + i, tuple(mono)) for i in range(length)]


def _sorted_factors(fs):
    return tuple(sorted(fs))


@dataclass(frozen=True)
class FactorProduct:
    """prefactor * sign * q^pre_qexp * x^pre_mono * prod(num) / prod(den)."""

    nvars: int
    num: tuple = ()
    den: tuple = ()
    prefactor: QRat = field(default_factory=QRat.one)
    pre_sign: int = 1
    pre_qexp: int = 0
    pre_mono: tuple = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "num", _sorted_factors(self.num))
        object.__setattr__(self, "den", _sorted_factors(self.den))
        if self.pre_mono is None:
            object.__setattr__(self, "pre_mono", zero_vec(self.nvars))
        if len(self.pre_mono) != self.nvars:
            raise ValueError("premonomial length mismatch")
        for f in self.num + self.den:
            if len(f.mono) != self.nvars:
                raise ValueError("factor exponent vector length mismatch")
        for f in self.den:
            if f.is_zero_factor():
                raise ZeroDivisionError("zero factor in denominator")
        if self.pre_sign not in (1, -1):
            raise ValueError("pre_sign must be +1 or -1")

    # -- construction helpers ----------------------------------------------

    @classmethod
    def one(cls, nvars):
        return cls(nvars)

    def with_factors(self, num=None, den=None):
        return FactorProduct(
            self.nvars,
            self.num if num is None else tuple(num),
            self.den if den is None else tuple(den),
            self.prefactor,
            self.pre_sign,
            self.pre_qexp,
            self.pre_mono,
        )

    def times_monomial(self, sign=1, qexp=0, mono=None):
        return FactorProduct(
            self.nvars,
            self.num,
            self.den,
            self.prefactor,
            self.pre_sign * sign,
            self.pre_qexp + qexp,
            self.pre_mono if mono is None else evec_add(self.pre_mono, mono),
        )

    def times_prefactor(self, r: QRat):
        return FactorProduct(
            self.nvars,
            self.num,
            self.den,
            self.prefactor * r,
            self.pre_sign,
            self.pre_qexp,
            self.pre_mono,
        )

    def __mul__(self, other):
        if not isinstance(other, FactorProduct):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")
        return FactorProduct(
            self.nvars,
            self.num + other.num,
            self.den + other.den,
            self.prefactor * other.prefactor,
            self.pre_sign * other.pre_sign,
            self.pre_qexp + other.pre_qexp,
            evec_add(self.pre_mono, other.pre_mono),
        )

    # -- inspection ----------------------------------------------------------

    def factor_lines(self):
        """Debug serialization as a factor list."""
        out = {
            "prefactor": str(self.prefactor),
            "monomial": "%sq^%d*%s"
            % ("-" if self.pre_sign < 0 else "", self.pre_qexp, monomial_str(self.pre_mono)),
            "num": [str(f) for f in self.num],
            "den": [str(f) for f in self.den],
        }
        return out

    def __str__(self):
        parts = []
        if self.prefactor != QRat.one() or (self.pre_sign, self.pre_qexp) != (1, 0) or any(self.pre_mono):
            mono = monomial_str(self.pre_mono)
            pre = "%s%s" % ("-" if self.pre_sign < 0 else "", str(self.prefactor))
            if self.pre_qexp:
                pre += "*q^%d" % self.pre_qexp
            if mono != "1":
                pre += "*%s" % mono
            parts.append(pre)
        parts.extend("(%s)" % f for f in self.num)
        s = "*".join(parts) if parts else "1"
        if self.den:
            s += " / " + "*".join("(%s)" % f for f in self.den)
        return s


def subst_var(F: FactorProduct, i: int, j: int, s: int) -> FactorProduct:
    """Substitute x_i -> x_j * q^s in every factor and the premonomial."""
    return subst_many(F, {i: (j, s)})


def subst_many(F: FactorProduct, mapping) -> FactorProduct:
    """Apply x_i -> x_{j_i} * q^{s_i} simultaneously for i in mapping."""

    def sub_vec(e, qacc):
        le = list(e)
        for i, (j, s) in mapping.items():
            ei = e[i]
            if ei and i != j:
                qacc += s * ei
                le[j] += ei
                le[i] = 0
            elif ei:
                qacc += s * ei
        return tuple(le), qacc

    num = []
    for f in F.num:
        mono, q = sub_vec(f.mono, f.qexp)
        num.append(AtomicFactor(q, mono))
    den = []
    for f in F.den:
        mono, q = sub_vec(f.mono, f.qexp)
        den.append(AtomicFactor(q, mono))
    pre_mono, pre_q = sub_vec(F.pre_mono, F.pre_qexp)
    return FactorProduct(
        F.nvars, tuple(num), tuple(den), F.prefactor, F.pre_sign, pre_q, pre_mono
    )


# ---------------------------------------------------------------------------
# identity kernels


def build_qdyson_kernel(a) -> FactorProduct:
    """prod_{i<j} (x_i/x_j)_{a_i} * (q x_j/x_i)_{a_j} over x_0..x_n."""
    a = tuple(a)
    if any(v < 0 for v in a):
        raise ValueError("exponents must be nonnegative")
    nvars = len(a)
    if nvars < 2:
        raise ValueError("need at least two variables")
    num = []
    for i in range(nvars):
        for j in range(i + 1, nvars):
            up = evec_add(unit_vec(nvars, i), unit_vec(nvars, j, -1))
            down = evec_add(unit_vec(nvars, j), unit_vec(nvars, i, -1))
            num.extend(pochhammer(0, up, a[i]))
            num.extend(pochhammer(1, down, a[j]))
    return FactorProduct(nvars, tuple(num))


def build_hk_kernel(n, a, b, m, l, k) -> FactorProduct:
    """The q-Morris kernel with indicator shifts, in variables x_0..x_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0 <= m <= n and 0 <= l <= n):
        raise ValueError("m and l must lie in [0, n]")
    if b < 0 or k < 0:
        raise ValueError("b and k must be nonnegative")
    if a < (1 if m >= 1 else 0):
        raise ValueError("a must be >= 1 when m >= 1, >= 0 otherwise")
    nvars = n + 1
    num = []
    for i in range(1, n + 1):
        chi_hi = 1 if i <= m else 0
        chi_lo = 1 if i > m else 0
        chi_top = 1 if i >= n - l + 1 else 0
        up = evec_add(unit_vec(nvars, 0), unit_vec(nvars, i, -1))
        down = evec_add(unit_vec(nvars, i), unit_vec(nvars, 0, -1))
        num.extend(pochhammer(chi_hi, up, a - chi_hi))
        num.extend(pochhammer(chi_lo, down, b + chi_hi + chi_top))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            up = evec_add(unit_vec(nvars, i), unit_vec(nvars, j, -1))
            down = evec_add(unit_vec(nvars, j), unit_vec(nvars, i, -1))
            num.extend(pochhammer(0, up, k))
            num.extend(pochhammer(1, down, k))
    return FactorProduct(nvars, tuple(num))


def build_Q(n, b, m, l, k, h) -> FactorProduct:
    """The boundary rational function Q(h) in x_0..x_n.

    Numerator: (x_i/x_0)_{b+1+chi(i >= n-l+1)} for i <= m,
    (q x_i/x_0)_{b+chi(i >= n-l+1)} for i > m, and the full cross product.
    Denominator: 1 - x_0/(x_i q^t) for t = 0..h (i <= m) or t = 1..h (i > m).
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    if not (0 <= m < n and 0 <= l < n):
        raise ValueError("need 0 <= m, l < n")
    if b < 0 or k < 0:
        raise ValueError("b and k must be nonnegative")
    nvars = n + 1
    num = []
    den = []
    for i in range(1, n + 1):
        chi_top = 1 if i >= n - l + 1 else 0
        down = evec_add(unit_vec(nvars, i), unit_vec(nvars, 0, -1))
        up = evec_add(unit_vec(nvars, 0), unit_vec(nvars, i, -1))
        if i <= m:
            num.extend(pochhammer(0, down, b + 1 + chi_top))
            den.extend(AtomicFactor(-t, up) for t in range(0, h + 1))
        else:
            num.extend(pochhammer(1, down, b + chi_top))
            den.extend(AtomicFactor(-t, up) for t in range(1, h + 1))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            up = evec_add(unit_vec(nvars, i), unit_vec(nvars, j, -1))
            down = evec_add(unit_vec(nvars, j), unit_vec(nvars, i, -1))
            num.extend(pochhammer(0, up, k))
            num.extend(pochhammer(1, down, k))
    return FactorProduct(nvars, tuple(num), tuple(den))


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainState:
    """The substitution chain (r_1..r_s, k_1..k_s) over Q(h)."""

    n: int
    b: int
    m: int
    l: int
    kparam: int
    h: int
    r: tuple = ()
    k: tuple = ()

    def __post_init__(self):
        if len(self.r) != len(self.k):
            raise ValueError("r and k must have equal length")
        prev = 0
        for ri in self.r:
            if not (prev < ri <= self.n):
                raise ValueError("need 0 < r_1 < ... < r_s <= n")
            prev = ri
        for ki in self.k:
            if not (0 <= ki <= self.h):
                raise ValueError("need 0 <= k_i <= h")

    @property
    def s(self):
        return len(self.r)

    def extend(self, r_next, k_next):
        return ChainState(
            self.n, self.b, self.m, self.l, self.kparam, self.h,
            self.r + (r_next,), self.k + (k_next,),
        )

    def as_dict(self):
        return {"r": list(self.r), "k": list(self.k)}


def apply_E(F: FactorProduct, chain: ChainState) -> FactorProduct:
    """Replace x_{r_i} by x_{r_s} q^{k_s - k_i} for i = 0..s-1 (r_0 = k_0 = 0)."""
    if chain.s == 0:
        return F
    rs = chain.r[-1]
    ks = chain.k[-1]
    mapping = {0: (rs, ks)}
    for ri, ki in zip(chain.r[:-1], chain.k[:-1]):
        mapping[ri] = (rs, ks - ki)
    return subst_many(F, mapping)


def build_Q_chain(chain: ChainState) -> FactorProduct:
    """E applied to Q(h) * prod_i (1 - x_0/(x_{r_i} q^{k_i})).

    Each multiplied factor cancels the matching denominator factor before the
    substitution.  When the match is absent (k_i = 0 with r_i > m) the factor
    survives into the numerator and is itself taken to 1 - q^0 = 0, so the
    result is the exact zero product.
    """
    base = build_Q(chain.n, chain.b, chain.m, chain.l, chain.kparam, chain.h)
    if chain.s == 0:
        return base
    nvars = base.nvars
    den = Counter(base.den)
    extra_num = []
    for ri, ki in zip(chain.r, chain.k):
        up = evec_add(unit_vec(nvars, 0), unit_vec(nvars, ri, -1))
        f = AtomicFactor(-ki, up)
        if den[f] > 0:
            den[f] -= 1
        elif ki == 0 and ri > chain.m:
            extra_num.append(f)
        else:
            raise MalformedChain(
                "no denominator factor matches r=%d, k=%d" % (ri, ki)
            )
    F = base.with_factors(
        num=base.num + tuple(extra_num), den=tuple(den.elements())
    )
    out = apply_E(F, chain)
    # distinct poles are a standing assumption of the residue machinery
    seen = Counter(f for f in out.den if not f.is_pure_q())
    dups = [f for f, c in seen.items() if c > 1]
    if dups:
        raise DuplicateFactor("repeated denominator factor %s" % (str(dups[0]),))
    return out


# ---------------------------------------------------------------------------
# factor-level operations


def detect_zero(F: FactorProduct) -> Optional[AtomicFactor]:
    """A numerator factor equal to 1 - q^0 x^0, if one exists.

    Absence of a witness does not prove the product nonzero.
    """
    for f in F.num:
        if f.is_zero_factor():
            return f
    return None


def cancel(F: FactorProduct) -> FactorProduct:
    """Multiset difference num \\ den on identical atomic factors."""
    num = Counter(F.num)
    den = Counter(F.den)
    common = num & den
    if not common:
        return F
    num -= common
    den -= common
    return F.with_factors(num=tuple(num.elements()), den=tuple(den.elements()))


def fold_pure_q(F: FactorProduct) -> FactorProduct:
    """Move x-free factors (1 - q^s) into the QRat prefactor.

    Zero factors in the numerator are kept so detect_zero witnesses survive.
    """
    keep_num = []
    pnum = QPoly.one()
    for f in F.num:
        if f.is_pure_q() and not f.is_zero_factor():
            pnum = pnum * f.as_qpoly()
        else:
            keep_num.append(f)
    keep_den = []
    pden = QPoly.one()
    for f in F.den:
        if f.is_pure_q():
            pden = pden * f.as_qpoly()
        else:
            keep_den.append(f)
    if pnum == QPoly.one() and pden == QPoly.one():
        return F
    return FactorProduct(
        F.nvars,
        tuple(keep_num),
        tuple(keep_den),
        F.prefactor * QRat(pnum, pden),
        F.pre_sign,
        F.pre_qexp,
        F.pre_mono,
    )


def degree_in(F: FactorProduct, i: int) -> int:
    """Degree in x_i of the rational function (numerator minus denominator)."""
    if not 0 <= i < F.nvars:
        raise IndexError("variable index out of range")
    d = F.pre_mono[i]
    for f in F.num:
        e = f.mono[i]
        if e > 0:
            d += e
    for f in F.den:
        e = f.mono[i]
        if e > 0:
            d -= e
    return d


def poly_factor_terms(F: FactorProduct):
    """Raw (factors, pre_terms) for the polynomial part, in poly mode.

    The polynomial part is sign * q^pre_qexp * x^pre_mono * prod(num); the
    QRat prefactor is *not* included.
    """
    factors = [(f.mono, {f.qexp: -1}) for f in F.num]
    pre = {F.pre_mono: {F.pre_qexp: F.pre_sign}}
    return factors, pre


def scalar_factor_terms(F: FactorProduct, q0):
    """Raw (factors, pre_terms) for the polynomial part with q = q0."""
    factors = [(f.mono, -(q0**f.qexp)) for f in F.num]
    pre = {F.pre_mono: F.pre_sign * q0**F.pre_qexp}
    return factors, pre


def expand(F: FactorProduct) -> MultiLaurent:
    """Exact expansion to a MultiLaurent, prefactor and premonomial included.

    Raises NotPolynomial if denominator factors survive cancellation or the
    prefactor is not a polynomial.
    """
    G = fold_pure_q(cancel(F))
    if G.den:
        raise NotPolynomial("denominator factors remain: %s" % list(map(str, G.den)))
    if not G.prefactor.is_polynomial():
        raise NotPolynomial("prefactor has a nontrivial denominator")
    factors, pre = poly_factor_terms(G)
    raw = expand_product(factors, pre, False)
    scale = G.prefactor.num
    terms = {e: QPoly._raw(c) * scale for e, c in raw.items()}
    return MultiLaurent(G.nvars, terms)
