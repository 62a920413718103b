"""Closed forms: q-factorials, Gaussian binomials, Dyson/q-Dyson/q-Morris values."""

import itertools

import pytest

from qmorris.closed_forms import (
    ParamSet,
    dyson_rhs,
    gauss_binom,
    morris_rewritten_at,
    morris_rhs,
    prop52_lhs,
    prop52_rhs,
    q_factorial,
    qbinomial_theorem_finite,
    qdyson_rhs,
    vanishing_points_distinct,
    vanishing_sets,
)
from qmorris.exact_arith import QPoly, QRat

one = QPoly.one()


def qp(pairs):
    return QPoly(dict(pairs))


class TestQFactorial:
    def test_values(self):
        assert q_factorial(0) == one
        assert q_factorial(2) == (one - QPoly.q()) * qp({0: 1, 2: -1})
        assert q_factorial(3) == q_factorial(2) * qp({0: 1, 3: -1})

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            q_factorial(-1)


class TestGaussBinom:
    def test_two_choose_one(self):
        assert gauss_binom(2, 1) == QRat(qp({0: 1, 1: 1}))

    def test_zero_lower_index(self):
        assert gauss_binom(7, 0) == QRat.one()
        assert gauss_binom(-3, 0) == QRat.one()

    def test_negative_top(self):
        assert gauss_binom(-1, 1) == QRat(qp({-1: -1}))

    def test_vanishes_above_top(self):
        assert gauss_binom(2, 3) == QRat.zero()

    def test_pascal_style_recurrence(self):
        # qbinom(N,k) = qbinom(N-1,k-1) + q^k qbinom(N-1,k), any integer N
        for N in (-2, 0, 1, 4):
            for k in (1, 2, 3):
                lhs = gauss_binom(N, k)
                rhs = gauss_binom(N - 1, k - 1) + QRat(QPoly.term(1, k)) * gauss_binom(N - 1, k)
                assert lhs == rhs


def test_qbinomial_theorem_small():
    assert all(qbinomial_theorem_finite(N) for N in (0, 1, 3))


class TestDysonRhs:
    def test_values(self):
        assert dyson_rhs((1, 1)) == 2
        assert dyson_rhs((0, 0, 0)) == 1
        assert dyson_rhs((1, 1, 1)) == 6

    def test_qdyson_values(self):
        assert qdyson_rhs((1, 1)) == QRat(qp({0: 1, 1: 1}))
        assert qdyson_rhs((0, 0)) == QRat.one()
        assert qdyson_rhs((2, 1)) == QRat(qp({0: 1, 1: 1, 2: 1}))


class TestMorrisRhs:
    def test_n1_reduces_to_qdyson(self):
        for a in range(0, 4):
            for b in range(0, 4):
                for k in range(0, 3):
                    p = ParamSet(1, a, b, 0, 0, k)
                    assert morris_rhs(p) == qdyson_rhs((a, b))

    def test_smallest_value(self):
        assert morris_rhs(ParamSet(1, 1, 1, 0, 0, 0)) == QRat(qp({0: 1, 1: 1}))

    def test_k_zero_squares(self):
        p = ParamSet(2, 2, 1, 0, 0, 0)
        assert morris_rhs(p) == qdyson_rhs((2, 1)) * qdyson_rhs((2, 1))

    def test_forms_agree_on_grid(self):
        for n in (1, 2, 3):
            for m, l in itertools.product(range(n), repeat=2):
                for a in (1, 2, 3):
                    for b in (0, 1, 2):
                        for k in (0, 1, 3):
                            p = ParamSet(n, a, b, m, l, k)
                            assert morris_rhs(p) == morris_rhs(p, form="rewritten")

    def test_factorial_form_domain(self):
        with pytest.raises(ValueError):
            morris_rhs(ParamSet(2, 0, 0, 1, 0, 1))

    def test_rewritten_extends_to_negative_a(self):
        p = ParamSet(2, -3, 0, 1, 0, 2)
        val = morris_rhs(p, form="rewritten")
        from fractions import Fraction

        assert val.eval(Fraction(3, 2)) == morris_rewritten_at(p, -3, Fraction(3, 2))


class TestVanishingSets:
    def test_displayed_example(self):
        p = ParamSet(3, 1, 1, 2, 1, 4)
        assert vanishing_sets(p) == ([0, 4], [10], [1, 5, 9])

    def test_m_zero_empty_d1(self):
        p = ParamSet(2, 1, 1, 0, 1, 3)
        d1, d2, d3 = vanishing_sets(p)
        assert d1 == []

    def test_counts(self):
        for n in (2, 3):
            for m, l in itertools.product(range(n), repeat=2):
                for b in (0, 1, 2):
                    k = b + 2
                    p = ParamSet(n, 1, b, m, l, k)
                    d1, d2, d3 = vanishing_sets(p)
                    assert (len(d1), len(d2), len(d3)) == (m, l, n * b)
                    assert vanishing_points_distinct(p)

    def test_collision_at_small_k(self):
        # k = b+1 can collide D1 with D2 (here 2 = 2*k = (n-l)k+b+1)
        p = ParamSet(4, 1, 0, 3, 3, 1)
        d1, d2, _ = vanishing_sets(p)
        assert set(d1) & set(d2)
        assert not vanishing_points_distinct(p)
        # k = 0 collapses D1 entirely
        assert not vanishing_points_distinct(ParamSet(3, 1, 0, 2, 1, 0))


class TestProp52:
    def test_single_term_case(self):
        # k = b+1: only t = 0 survives and both sides are 1
        assert prop52_lhs(3, 1, 2) == QRat.one()
        assert prop52_rhs(3, 1, 2) == QRat.one()

    def test_hand_sum_n1(self):
        assert prop52_lhs(1, 0, 2) == QRat(qp({0: 1, 1: 1}))
        assert prop52_rhs(1, 0, 2) == QRat(qp({0: 1, 1: 1}))

    def test_hand_sum_n2(self):
        val = prop52_lhs(2, 0, 2)
        assert val == QRat(qp({0: 1, 1: 1, 2: 1, 3: 1}))
        assert val == prop52_rhs(2, 0, 2)

    def test_domain(self):
        with pytest.raises(ValueError):
            prop52_lhs(2, 2, 2)

    def test_small_grid(self):
        for n in (1, 2, 3):
            for k in range(1, 5):
                for b in range(0, k):
                    assert prop52_lhs(n, b, k) == prop52_rhs(n, b, k)
