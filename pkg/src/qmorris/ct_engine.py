"""Constant-term algorithms.

Four ways to evaluate constant terms of the kernel products, kept deliberately
independent so they can check each other:

* ct_direct / ct_value_at: expand the factored product with certified pruning
  and read off a coefficient (symbolic in q, or at an exact rational q0),
* pf_ct_step: one partial-fraction step (residues at small poles, plus the
  almost-proper constant),
* ct_recursion: the chain recursion over Q(h | r; k) with a machine-checkable
  certificate per leaf,
* interp_in_qa / mprime_at: exact Lagrange interpolation of the constant term
  as a polynomial in q^a at a specialized q0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ._core import classify_block, expand_coeff
from .closed_forms import ParamSet, vanishing_sets
from .exact_arith import QPoly, QRat
from .kernels import (
    AtomicFactor,
    ChainState,
    DuplicateFactor,
    FactorProduct,
    NotPolynomial,
    build_hk_kernel,
    build_Q_chain,
    cancel,
    degree_in,
    detect_zero,
    fold_pure_q,
    poly_factor_terms,
    scalar_factor_terms,
    subst_var,
)
from .laurent import evec_add, unit_vec, zero_vec


class PositiveDegree(ValueError):
    """The active variable has positive degree; no polynomial part is kept."""


class ImproperBranch(RuntimeError):
    """A recursion node is neither zero, branchable, nor the known survivor."""


# ---------------------------------------------------------------------------
# direct expansion


def order_factors(factors, nvars, var_order=None):
    """Order two-term factors so variables complete one at a time.

    A factor is scheduled in the phase of its earliest variable (by rank in
    ``var_order``); once a phase ends no later factor touches that variable,
    so pruning pins its exponent immediately.  x_0 is ranked last by default.
    """
    if var_order is None:
        var_order = list(range(1, nvars)) + [0]
    rank = {v: i for i, v in enumerate(var_order)}

    def key(fac):
        evec = fac[0]
        rs = [rank[v] for v in range(nvars) if evec[v]]
        if not rs:
            return (-1, -1)
        return (min(rs), max(rs))

    return sorted(factors, key=key)


def ct_direct(F: FactorProduct) -> QRat:
    """prefactor times the iterated constant term of the expansion.

    Requires the denominator to be empty after cancellation (pure q-power
    factors are folded into the prefactor first).
    """
    G = fold_pure_q(cancel(F))
    if detect_zero(G):
        return QRat.zero()
    if G.den:
        raise NotPolynomial(
            "denominator factors remain: %s" % [str(f) for f in G.den]
        )
    factors, pre = poly_factor_terms(G)
    factors = order_factors(factors, G.nvars)
    c = expand_coeff(factors, pre, G.nvars, zero_vec(G.nvars), False)
    return G.prefactor * QRat.from_poly(QPoly._raw(c))


def ct_value_at(F: FactorProduct, q0) -> Union[int, Fraction]:
    """Constant term of the expansion with q specialized to exact q0."""
    G = fold_pure_q(cancel(F))
    if detect_zero(G):
        return 0
    if G.den:
        raise NotPolynomial(
            "denominator factors remain: %s" % [str(f) for f in G.den]
        )
    factors, pre = scalar_factor_terms(G, q0)
    factors = order_factors(factors, G.nvars)
    c = expand_coeff(factors, pre, G.nvars, zero_vec(G.nvars), True)
    if G.prefactor == QRat.one():
        return c
    return G.prefactor.eval(q0) * c


def ct_coeff(F: FactorProduct, alpha) -> QRat:
    """prefactor times the coefficient of x^alpha of the expansion."""
    G = fold_pure_q(cancel(F))
    if detect_zero(G):
        return QRat.zero()
    if G.den:
        raise NotPolynomial("denominator factors remain")
    factors, pre = poly_factor_terms(G)
    factors = order_factors(factors, G.nvars)
    c = expand_coeff(factors, pre, G.nvars, tuple(alpha), False)
    return G.prefactor * QRat.from_poly(QPoly._raw(c))


# ---------------------------------------------------------------------------
# partial fractions

SMALL = "small"
LARGE = "large"


def classify_monomial(s: int, i: int, j: int) -> str:
    """The monomial q^s x_i / x_j is small iff i < j."""
    if i == j:
        raise ValueError("need distinct variable indices")
    return SMALL if i < j else LARGE


def _flip_poles(F: FactorProduct, var: int):
    """Rewrite den factors so every pole in var reads 1 - q^w x_var/x_t.

    1/(1 - q^s x^e) with e[var] = -1 equals -q^-s x^-e / (1 - q^-s x^-e).
    Returns (F_rewritten, poles, den_rest).
    """
    poles = []
    rest = []
    sign, qexp, mono = F.pre_sign, F.pre_qexp, F.pre_mono
    for f in F.den:
        ev = f.mono[var]
        if ev == 0:
            rest.append(f)
            continue
        if ev == 1:
            g = f
        elif ev == -1:
            g = AtomicFactor(-f.qexp, tuple(-x for x in f.mono))
            sign = -sign
            qexp -= f.qexp
            mono = evec_add(mono, tuple(-x for x in f.mono))
        else:
            raise ValueError("pole is not linear in the active variable")
        others = [(v, e) for v, e in enumerate(g.mono) if e and v != var]
        if g.mono[var] != 1 or len(others) != 1 or others[0][1] != -1:
            raise ValueError("pole is not of the form 1 - x_var/alpha")
        poles.append(g)
    if len(set(poles)) != len(poles):
        dup = [g for g in poles if poles.count(g) > 1][0]
        raise DuplicateFactor("repeated pole %s in the active variable" % (str(dup),))
    G = FactorProduct(
        F.nvars, F.num, tuple(rest) + tuple(poles), F.prefactor, sign, qexp, mono
    )
    return G, poles, tuple(rest)


def _leading_constant(F: FactorProduct, var: int, poles, den_rest) -> FactorProduct:
    """The almost-proper constant (-1)^m (prod alpha_j) LC_var(numerator)."""
    sign, qexp = F.pre_sign, F.pre_qexp
    mono = list(F.pre_mono)
    mono[var] = 0
    mono = tuple(mono)
    num_keep = []
    for f in F.num:
        ev = f.mono[var]
        if ev == 0:
            num_keep.append(f)
        elif ev > 0:
            sign = -sign
            qexp += f.qexp
            m = list(f.mono)
            m[var] = 0
            mono = evec_add(mono, tuple(m))
        # ev < 0: the top coefficient in var is 1; the factor drops out
    if len(poles) % 2:
        sign = -sign
    for g in poles:
        # alpha = x_t q^{-w} for the pole 1 - q^w x_var/x_t
        t = next(v for v, e in enumerate(g.mono) if e == -1)
        qexp -= g.qexp
        mono = evec_add(mono, unit_vec(F.nvars, t))
    return FactorProduct(
        F.nvars, tuple(num_keep), den_rest, F.prefactor, sign, qexp, mono
    )


def pf_ct_step(F: FactorProduct, var: int):
    """One constant-term step in x_var by partial fractions.

    Returns the list of surviving parts: one residue per small pole, plus the
    leading constant when the degree in x_var is exactly zero.  Degree must
    be <= 0; repeated poles raise DuplicateFactor.
    """
    if not 0 <= var < F.nvars:
        raise IndexError("variable index out of range")
    deg = degree_in(F, var)
    if deg > 0:
        raise PositiveDegree(
            "degree %d in x%d; general polynomial parts are out of scope"
            % (deg, var)
        )
    G, poles, den_rest = _flip_poles(F, var)
    out = []
    if deg == 0:
        out.append(_leading_constant(G, var, poles, den_rest))
    for g in poles:
        t = next(v for v, e in enumerate(g.mono) if e == -1)
        if classify_monomial(g.qexp, var, t) != SMALL:
            continue
        remaining = list(G.den)
        remaining.remove(g)
        H = G.with_factors(den=tuple(remaining))
        out.append(subst_var(H, var, t, -g.qexp))
    return out


def _fold_pure_value(T: FactorProduct) -> QRat:
    """Exact QRat value of an x-free factor product."""
    G = fold_pure_q(cancel(T))
    if detect_zero(G):
        return QRat.zero()
    if G.num or G.den:
        raise ValueError("product is not free of the x variables")
    if any(G.pre_mono):
        raise ValueError("monomial part is not free of the x variables")
    return G.prefactor * QRat.from_poly(QPoly.term(G.pre_sign, G.pre_qexp))


def ct_iterated_pf(F: FactorProduct) -> QRat:
    """Full constant term via pf_ct_step iterated in ascending variable order."""
    terms = [F]
    for var in range(F.nvars):
        nxt = []
        for T in terms:
            nxt.extend(pf_ct_step(T, var))
        terms = nxt
    total = QRat.zero()
    for T in terms:
        total = total + _fold_pure_value(T)
    return total


# ---------------------------------------------------------------------------
# the gap classifier behind the recursion's zero leaves


@dataclass(frozen=True)
class EarlySmall:
    i: int


@dataclass(frozen=True)
class ClosePair:
    i: int
    j: int


@dataclass(frozen=True)
class Exceptional:
    pass


def classify_ktuple(kparam: int, b: int, s: int, tup):
    """Classify an exponent tuple from a chain of length s.

    EarlySmall(i): the lowest 1-based i with tup_i <= b.  ClosePair(i, j):
    the lexicographically first pair with 1-k <= tup_j - tup_i <= k.
    Exceptional: neither holds, and then tup_i = (s-i)k + b + 1 for all i.
    """
    tup = tuple(tup)
    if len(tup) != s or s < 1:
        raise ValueError("tuple length must equal s >= 1")
    top = (s - 1) * kparam + b + 1
    for v in tup:
        if not 0 <= v <= top:
            raise ValueError("tuple entry %d outside [0, %d]" % (v, top))
    for i, v in enumerate(tup):
        if v <= b:
            return EarlySmall(i + 1)
    for i in range(s - 1):
        for j in range(i + 1, s):
            if 1 - kparam <= tup[j] - tup[i] <= kparam:
                return ClosePair(i + 1, j + 1)
    expected = tuple((s - i) * kparam + b + 1 for i in range(1, s + 1))
    if tup != expected:
        raise AssertionError(
            "tuple %r escapes every case but is not the threshold tuple" % (tup,)
        )
    return Exceptional()


def classify_ktuple_block(kparam: int, b: int, s: int):
    """Packed verdicts for every admissible tuple, odometer order.

    Each entry is kind << 16 | i << 8 | j with kind 0=EarlySmall,
    1=ClosePair, 2=Exceptional and 1-based positions.
    """
    return classify_block(kparam, b, s)


# ---------------------------------------------------------------------------
# the chain recursion with certificates

ZERO_BY_FACTOR = "zero_by_factor"
EXPANDED = "expanded"
BRANCH = "branch"


@dataclass
class CertNode:
    chain: ChainState
    verdict: str
    witness: Optional[AtomicFactor] = None
    value: Optional[QRat] = None
    children: tuple = ()

    def to_obj(self):
        out = {"chain": self.chain.as_dict(), "verdict": self.verdict}
        if self.verdict == ZERO_BY_FACTOR:
            out["witness"] = str(self.witness)
        elif self.verdict == EXPANDED:
            out["value"] = str(self.value)
            out["product"] = build_Q_chain(self.chain).factor_lines()
        else:
            out["children"] = [c.to_obj() for c in self.children]
        return out


@dataclass
class RecursionCertificate:
    """The proof tree for CT Q(h): every leaf is machine-checkable."""

    params: ParamSet
    h: int
    root: CertNode
    total: QRat

    def walk(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def leaves(self):
        return [n for n in self.walk() if n.verdict != BRANCH]

    def expanded_leaves(self):
        return [n for n in self.walk() if n.verdict == EXPANDED]

    def validate(self):
        """Re-check every leaf from scratch; returns a list of failures."""
        failures = []
        total = QRat.zero()
        for node in self.walk():
            if node.verdict == ZERO_BY_FACTOR:
                if node.witness is None or not node.witness.is_zero_factor():
                    failures.append("witness at %s is not the zero factor" % (node.chain.as_dict(),))
                    continue
                product = build_Q_chain(node.chain)
                if node.witness not in product.num:
                    failures.append("witness missing from rebuilt product at %s" % (node.chain.as_dict(),))
            elif node.verdict == EXPANDED:
                value = ct_direct(build_Q_chain(node.chain))
                if value != node.value:
                    failures.append("stored value mismatch at %s" % (node.chain.as_dict(),))
                total = total + node.value
        if total != self.total:
            failures.append("leaf values do not sum to the stored total")
        return failures

    def to_obj(self):
        p = self.params
        return {
            "params": {"n": p.n, "b": p.b, "m": p.m, "l": p.l, "k": p.k},
            "h": self.h,
            "total": str(self.total),
            "tree": self.root.to_obj(),
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_obj(), indent=indent)


def expected_survivor_chain(p: ParamSet, h: int) -> ChainState:
    """The single chain the recursion cannot resolve at the extra point:
    r = (1..n-l), k_i = (n-l-i)k + b + 1."""
    s = p.n - p.l
    r = tuple(range(1, s + 1))
    kv = tuple((s - i) * p.k + p.b + 1 for i in range(1, s + 1))
    return ChainState(p.n, p.b, p.m, p.l, p.k, h, r, kv)


def ct_recursion(p: ParamSet, h: int):
    """Evaluate CT Q(h) by the chain recursion; returns (total, certificate).

    Every node is either killed by an explicit zero factor, branched through
    a verified-proper partial-fraction step, or (only at the extra point)
    collapsed by exact expansion.  Requires k > b+1 and 0 <= m, l < n, and h
    in one of the vanishing sets or equal to the extra point.
    """
    if p.k <= p.b + 1:
        raise ValueError("need k > b+1")
    if not (0 <= p.m < p.n and 0 <= p.l < p.n):
        raise ValueError("need 0 <= m, l < n")
    d1, d2, d3 = vanishing_sets(p)
    allowed = set(d1) | set(d2) | set(d3) | {p.extra_point}
    if h not in allowed:
        raise ValueError("h=%d is neither a vanishing point nor the extra point" % h)
    survivor = expected_survivor_chain(p, h) if h == p.extra_point else None
    expanded_total = [QRat.zero()]

    def visit(chain: ChainState) -> CertNode:
        F = build_Q_chain(chain)
        if chain.s >= 1:
            w = detect_zero(F)
            if w is not None:
                return CertNode(chain, ZERO_BY_FACTOR, witness=w)
        active = chain.r[-1] if chain.s else 0
        if chain.s < p.n and degree_in(F, active) < 0:
            children = []
            r_lo = chain.r[-1] if chain.s else 0
            for rn in range(r_lo + 1, p.n + 1):
                for kn in range(0, h + 1):
                    if kn == 0 and rn > p.m:
                        continue
                    children.append(visit(chain.extend(rn, kn)))
            return CertNode(chain, BRANCH, children=tuple(children))
        if survivor is None or chain != survivor:
            raise ImproperBranch(
                "chain %s is not branchable and not the expected survivor"
                % (chain.as_dict(),)
            )
        value = ct_direct(F)
        expanded_total[0] = expanded_total[0] + value
        return CertNode(chain, EXPANDED, value=value)

    root = visit(ChainState(p.n, p.b, p.m, p.l, p.k, h))
    total = expanded_total[0]
    return total, RecursionCertificate(p, h, root, total)


# ---------------------------------------------------------------------------
# interpolation in q^a


@dataclass(frozen=True)
class InterpolatedPoly:
    """The constant term as a function of t = q0^a: an exact polynomial of
    degree at most n*b + m + l."""

    coeffs: tuple
    q0: Fraction
    params: ParamSet
    samples: tuple = ()

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self):
        deg = -1
        for i, c in enumerate(self.coeffs):
            if c:
                deg = i
        return deg

    def check_samples(self):
        return all(self.evaluate(t) == v for t, v in self.samples)


def _lagrange(points):
    """Exact interpolation through distinct rational points, ascending coeffs."""
    npts = len(points)
    coeffs = [Fraction(0)] * npts
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for t, c in enumerate(basis):
                nxt[t] += c * (-xj)
                nxt[t + 1] += c
            basis = nxt
            den *= xi - xj
        w = yi / den
        for t, c in enumerate(basis):
            coeffs[t] += c * w
    return tuple(coeffs)


_interp_cache = {}


def interp_in_qa(p: ParamSet, q0=None) -> InterpolatedPoly:
    """Interpolate the constant term of the kernel through d+1 exact samples.

    Samples run over a = 0..d, shifted to 1..d+1 when m >= 1 (the kernel is
    undefined at a = 0 there).  The a field of the parameter set is ignored.
    """
    if q0 is None:
        q0 = p.q0
    if q0 is None:
        raise ValueError("no q0 specialization given")
    q0 = Fraction(q0)
    if q0 in (0, 1, -1):
        raise ValueError("q0 must avoid 0 and +-1 so the sample points stay distinct")
    key = (p.n, p.b, p.m, p.l, p.k, q0)
    hit = _interp_cache.get(key)
    if hit is not None:
        return hit
    d = p.degree_bound
    a0 = 1 if p.m >= 1 else 0
    pts = []
    for a in range(a0, a0 + d + 1):
        F = build_hk_kernel(p.n, a, p.b, p.m, p.l, p.k)
        v = Fraction(ct_value_at(F, q0))
        pts.append((q0**a, v))
    poly = InterpolatedPoly(_lagrange(pts), q0, p, tuple(pts))
    _interp_cache[key] = poly
    return poly


def mprime_at(p: ParamSet, h: int, q0=None) -> Fraction:
    """The interpolated constant-term polynomial evaluated at t = q0^{-h}."""
    poly = interp_in_qa(p, q0)
    return poly.evaluate(poly.q0 ** (-h))


# ---------------------------------------------------------------------------
# the composition-sum expansion of the constant term


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _binom2(x):
    return x * (x - 1) // 2


def composition_summand(p: ParamSet, comp) -> FactorProduct:
    """The a-free Laurent polynomial attached to one composition k_1..k_n."""
    n, b, m, l, k = p.n, p.b, p.m, p.l, p.k
    nvars = n + 1
    sign = 1
    qexp = 0
    mono = [0] * nvars
    for i in range(1, n + 1):
        bi = b + (1 if i >= n - l + 1 else 0)
        chi = 1 if i <= m else 0
        ki = comp[i - 1]
        if (ki + bi + chi) % 2:
            sign = -sign
        qexp += _binom2(bi + 1) + _binom2(ki) - ki * bi
        mono[i] = bi + chi - ki
    num = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            up = evec_add(unit_vec(nvars, i), unit_vec(nvars, j, -1))
            down = evec_add(unit_vec(nvars, j), unit_vec(nvars, i, -1))
            num.extend(AtomicFactor(t, up) for t in range(k))
            num.extend(AtomicFactor(1 + t, down) for t in range(k))
    return FactorProduct(
        nvars, tuple(num), (), QRat.one(), sign, qexp, tuple(mono)
    )


def aomoto_expansion_check(p: ParamSet) -> bool:
    """Check the expansion of the kernel constant term over compositions.

    The constant term must equal the sum over k_1+...+k_n = n*b+m+l of
    prod_i qbinom(a + b*_i, k_i) times the constant term of the attached
    a-free Laurent polynomial.
    """
    from .closed_forms import gauss_binom

    lhs = ct_direct(build_hk_kernel(p.n, p.a, p.b, p.m, p.l, p.k))
    rhs = QRat.zero()
    d = p.degree_bound
    for comp in _compositions(d, p.n):
        coef = QRat.one()
        for i in range(1, p.n + 1):
            bi = p.b + (1 if i >= p.n - p.l + 1 else 0)
            coef = coef * gauss_binom(p.a + bi, comp[i - 1])
            if not coef:
                break
        if not coef:
            continue
        rhs = rhs + coef * ct_direct(composition_summand(p, comp))
    return lhs == rhs
