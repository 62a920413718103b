"""Structured factor products: kernels, Q(h), chains, zero detection, cancellation."""

import pytest

from qmorris.closed_forms import ParamSet, morris_rhs
from qmorris.exact_arith import QPoly, QRat
from qmorris.kernels import (
    AtomicFactor,
    ChainState,
    FactorProduct,
    NotPolynomial,
    apply_E,
    build_hk_kernel,
    build_Q,
    build_Q_chain,
    build_qdyson_kernel,
    cancel,
    degree_in,
    detect_zero,
    expand,
    fold_pure_q,
    pochhammer,
)
from qmorris.laurent import MultiLaurent, ml_subst

ZERO_FACTOR = AtomicFactor(0, (0, 0, 0))


def mono(nvars, **kw):
    v = [0] * nvars
    for name, e in kw.items():
        v[int(name[1:])] = e
    return tuple(v)


class TestPochhammer:
    def test_empty(self):
        assert pochhammer(0, (1, -1), 0) == []

    def test_shifted_base(self):
        got = pochhammer(1, (-1, 1), 2)  # (q x1/x0)_2
        assert got == [AtomicFactor(1, (-1, 1)), AtomicFactor(2, (-1, 1))]

    def test_pure_q_run_hits_zero_factor(self):
        got = pochhammer(-3, (0, 0), 4)
        assert got[3] == AtomicFactor(0, (0, 0)) and got[3].is_zero_factor()

    def test_negative_length(self):
        with pytest.raises(ValueError):
            pochhammer(0, (1, -1), -1)


class TestBuildKernels:
    def test_smallest_refined_kernel(self):
        got = build_hk_kernel(1, 1, 1, 0, 0, 0)
        assert set(got.num) == {AtomicFactor(0, (1, -1)), AtomicFactor(1, (-1, 1))}

    def test_trivial_kernel_is_one(self):
        got = build_hk_kernel(2, 0, 0, 0, 0, 0)
        assert got.num == () and got.den == ()

    def test_rejects_a_zero_with_m_positive(self):
        with pytest.raises(ValueError):
            build_hk_kernel(2, 0, 0, 1, 0, 1)

    def test_indicator_shifts(self):
        got = build_hk_kernel(2, 1, 0, 1, 1, 1)
        expected = (
            [AtomicFactor(0, mono(3, x1=1, x0=-1))]          # (x1/x0)_1
            + [AtomicFactor(0, mono(3, x0=1, x2=-1))]        # (x0/x2)_1
            + [AtomicFactor(1, mono(3, x2=1, x0=-1))]        # (q x2/x0)_1
            + [AtomicFactor(0, mono(3, x1=1, x2=-1))]        # (x1/x2)_1
            + [AtomicFactor(1, mono(3, x2=1, x1=-1))]        # (q x2/x1)_1
        )
        assert got == FactorProduct(3, tuple(expected))

    def test_structured_matches_direct_product(self):
        kernel = build_hk_kernel(2, 2, 1, 1, 0, 1)
        direct = MultiLaurent.constant(3, 1)
        for f in kernel.num:
            direct = direct * MultiLaurent(
                3, {(0, 0, 0): QPoly.one(), f.mono: QPoly.term(-1, f.qexp)}
            )
        assert expand(kernel) == direct

    def test_qdyson_kernel_factor_count(self):
        a = (2, 1, 1)
        kernel = build_qdyson_kernel(a)
        assert len(kernel.num) == 2 * sum(a)


class TestBuildQ:
    def test_single_denominator_factor(self):
        Q = build_Q(2, 0, 1, 0, 2, 0)
        assert Q.den == (AtomicFactor(0, mono(3, x0=1, x1=-1)),)

    def test_degree_in_x0(self):
        for (n, b, m, l, k, h) in [(2, 0, 1, 0, 2, 3), (3, 1, 2, 1, 3, 5)]:
            Q = build_Q(n, b, m, l, k, h)
            assert degree_in(Q, 0) == -(n * h + m)

    def test_empty_denominator_ranges(self):
        Q = build_Q(2, 0, 0, 0, 2, 0)
        assert Q.den == ()


class TestApplyE:
    def test_single_substitution(self):
        F = FactorProduct(2, pre_mono=(-1, 1))  # x1/x0
        chain = ChainState(1, 0, 0, 0, 1, 5, (1,), (5,))
        assert apply_E(F, chain) == FactorProduct(2, pre_qexp=-5)

    def test_zero_shift(self):
        F = FactorProduct(2, pre_mono=(1, -1))  # x0/x1
        chain = ChainState(1, 0, 1, 0, 1, 3, (1,), (0,))
        assert apply_E(F, chain) == FactorProduct(2)

    def test_two_step_chain(self):
        F = FactorProduct(3, pre_mono=(1, 1, -2))  # x0*x1/x2^2
        chain = ChainState(2, 0, 1, 0, 2, 5, (1, 2), (3, 1))
        assert apply_E(F, chain) == FactorProduct(3, pre_qexp=-1)

    def test_homomorphism(self):
        chain = ChainState(2, 0, 1, 0, 2, 4, (1, 2), (4, 2))
        F = FactorProduct(3, (AtomicFactor(1, mono(3, x1=1, x0=-1)),), pre_mono=(0, 1, 0))
        G = FactorProduct(3, (AtomicFactor(0, mono(3, x0=1, x2=-1)),), pre_qexp=2)
        assert apply_E(F * G, chain) == apply_E(F, chain) * apply_E(G, chain)


class TestBuildQChain:
    def test_empty_chain_is_Q(self):
        chain = ChainState(2, 0, 1, 0, 2, 3)
        assert build_Q_chain(chain) == build_Q(2, 0, 1, 0, 2, 3)

    def test_survivor_term_matches_hand_built_image(self):
        # n=2, m=1, l=0, b=0, k=2, h=3: chain r=(1,2), k=(3,1)
        chain = ChainState(2, 0, 1, 0, 2, 3, (1, 2), (3, 1))
        got = build_Q_chain(chain)
        base = build_Q(2, 0, 1, 0, 2, 3)
        killed = {AtomicFactor(-3, mono(3, x0=1, x1=-1)),
                  AtomicFactor(-1, mono(3, x0=1, x2=-1))}
        den = list(base.den)
        for f in killed:
            den.remove(f)
        by_hand = apply_E(base.with_factors(den=tuple(den)), chain)
        assert got == by_hand
        assert detect_zero(got) is None

    def test_definitional_zero(self):
        # k_1 = 0 with r_1 > m: the multiplied factor survives as 1 - q^0
        chain = ChainState(2, 0, 1, 0, 2, 3, (2,), (0,))
        got = build_Q_chain(chain)
        w = detect_zero(got)
        assert w is not None and w.is_zero_factor()
        # the zero factor annihilates the numerator part
        num_only = got.with_factors(den=())
        assert expand(num_only) == MultiLaurent(3, {})


class TestDetectZero:
    def test_explicit_witness(self):
        F = FactorProduct(3, (ZERO_FACTOR, AtomicFactor(2, (0, 0, 0))))
        assert detect_zero(F) == ZERO_FACTOR

    def test_pochhammer_run(self):
        F = FactorProduct(3, tuple(pochhammer(-2, (0, 0, 0), 3)))
        assert detect_zero(F) == ZERO_FACTOR

    def test_early_small_case_with_rs_at_most_m(self):
        # chain with k_1 <= b and r_s <= m vanishes through (q^{-k_1})_{b+1}
        chain = ChainState(3, 1, 2, 0, 3, 4, (2,), (1,))
        w = detect_zero(build_Q_chain(chain))
        assert w is not None and w.is_zero_factor()

    def test_soundness_on_small_products(self):
        F = build_hk_kernel(2, 1, 1, 1, 1, 1)
        assert detect_zero(F) is None and expand(F)


class TestCancel:
    def test_multiset_difference(self):
        A = AtomicFactor(1, mono(2, x0=1, x1=-1))
        B = AtomicFactor(2, mono(2, x1=1, x0=-1))
        F = FactorProduct(2, (A, B), (A,))
        got = cancel(F)
        assert got.num == (B,) and got.den == ()

    def test_prefix_cancellation(self):
        # den run (x1/x2)_1 inside num run (x1/x2)_3
        num = tuple(pochhammer(0, mono(3, x1=1, x2=-1), 3))
        den = tuple(pochhammer(0, mono(3, x1=1, x2=-1), 1))
        got = cancel(FactorProduct(3, num, den))
        assert got.den == () and got.num == num[1:]

    def test_disjoint_unchanged(self):
        F = FactorProduct(
            2,
            (AtomicFactor(1, mono(2, x0=1, x1=-1)),),
            (AtomicFactor(2, mono(2, x0=1, x1=-1)),),
        )
        assert cancel(F) == F

    def test_survivor_denominator_empties(self):
        # the chain the recursion expands at the extra point really does
        # cancel to a Laurent polynomial
        p = ParamSet(2, 1, 0, 1, 1, 3)
        h = p.extra_point
        chain = ChainState(2, 0, 1, 1, 3, h, (1,), (h,))
        G = fold_pure_q(cancel(build_Q_chain(chain)))
        assert G.den == ()


class TestExpandDegree:
    def test_not_polynomial(self):
        F = FactorProduct(2, (), (AtomicFactor(0, mono(2, x0=1, x1=-1)),))
        with pytest.raises(NotPolynomial):
            expand(F)

    def test_degree_examples(self):
        F = FactorProduct(2, (AtomicFactor(0, (-1, 1)),))  # 1 - x1/x0
        assert degree_in(F, 0) == 0 and degree_in(F, 1) == 1
        assert degree_in(FactorProduct(2), 0) == 0

    def test_fold_moves_pure_factors(self):
        F = FactorProduct(
            2,
            (AtomicFactor(2, (0, 0)), AtomicFactor(0, (1, -1))),
            (AtomicFactor(1, (0, 0)),),
        )
        G = fold_pure_q(F)
        assert G.num == (AtomicFactor(0, (1, -1)),) and G.den == ()
        assert G.prefactor == QRat(QPoly({0: 1, 2: -1}), QPoly({0: 1, 1: -1}))


class TestExpandMultiplicative:
    def test_expansion_is_multiplicative(self):
        import random

        rng = random.Random(31)
        for _ in range(25):
            def rand_product():
                num = []
                for _ in range(rng.randint(0, 3)):
                    e = tuple(rng.randint(-1, 1) for _ in range(3))
                    num.append(AtomicFactor(rng.randint(0, 2), e))
                return FactorProduct(
                    3, tuple(num), pre_qexp=rng.randint(0, 2),
                    pre_mono=tuple(rng.randint(-1, 1) for _ in range(3)),
                )

            F, G = rand_product(), rand_product()
            assert expand(F * G) == expand(F) * expand(G)


class TestDetectZeroSoundness:
    def test_witness_implies_zero_expansion(self):
        import random

        rng = random.Random(5)
        seen_witness = 0
        for _ in range(120):
            num = []
            for _ in range(rng.randint(1, 4)):
                if rng.random() < 0.5:
                    e = (0, 0, 0)
                else:
                    e = tuple(rng.randint(-1, 1) for _ in range(3))
                num.append(AtomicFactor(rng.randint(-1, 1), e))
            F = FactorProduct(3, tuple(num))
            if detect_zero(F) is not None:
                seen_witness += 1
                assert expand(F) == MultiLaurent(3, {})
        assert seen_witness > 20


class TestLGeqNRewrite:
    @pytest.mark.parametrize("a,b,m,k", [(1, 0, 0, 1), (2, 1, 1, 2), (1, 1, 2, 1)])
    def test_kernel_identity(self, a, b, m, k):
        # l = n folds into b+1 with l = 0, with no variable rescaling
        n = 2
        assert expand(build_hk_kernel(n, a, b, m, n, k)) == expand(
            build_hk_kernel(n, a, b + 1, m, 0, k)
        )
        assert morris_rhs(ParamSet(n, a, b, m, n, k)) == morris_rhs(
            ParamSet(n, a, b + 1, m, 0, k)
        )


class TestMEqualsNReduction:
    @pytest.mark.parametrize("a,b,l,k", [(1, 0, 0, 1), (2, 1, 1, 2), (2, 0, 1, 1)])
    def test_kernel_identity_after_rescale(self, a, b, l, k):
        n = 2
        lhs = expand(build_hk_kernel(n, a, b, n, l, k))
        rhs = ml_subst(expand(build_hk_kernel(n, a - 1, b + 1, 0, l, k)), 0, 0, 1)
        assert lhs == rhs

    @pytest.mark.parametrize("a,b,l,k", [(1, 0, 0, 1), (2, 1, 1, 2), (2, 0, 1, 1)])
    def test_closed_forms_match(self, a, b, l, k):
        n = 2
        assert morris_rhs(ParamSet(n, a, b, n, l, k)) == morris_rhs(
            ParamSet(n, a - 1, b + 1, 0, l, k)
        )
