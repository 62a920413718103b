"""Shared generators for randomized tests."""

from qmorris.ct_engine import PositiveDegree, ct_iterated_pf
from qmorris.kernels import AtomicFactor, DuplicateFactor, FactorProduct


def unit(i, n):
    v = [0] * n
    v[i] = 1
    return tuple(v)


def pair_mono(i, j, n):
    return tuple(a - b for a, b in zip(unit(i, n), unit(j, n)))


def random_proper_kernel(rng, nvars=3):
    """A random rational factor product on which ascending-order partial
    fractions runs to completion; returns (kernel, its pf value).

    Poles are biased toward the contributing orientation and degrees toward
    almost-proper so a decent share of the samples have nonzero constant
    term.  Out-of-class draws (positive degree or repeated poles somewhere
    down the iteration) are rejected and redrawn.
    """
    while True:
        den = []
        for _ in range(rng.randint(2, 4)):
            i, j = rng.sample(range(nvars), 2)
            if rng.random() < 0.75:
                i, j = min(i, j), max(i, j)
            f = AtomicFactor(rng.randint(-2, 2), pair_mono(i, j, nvars))
            if f not in den:
                den.append(f)
        num = []
        for _ in range(rng.randint(0, 2)):
            i, j = rng.sample(range(nvars), 2)
            num.append(AtomicFactor(rng.randint(0, 2), pair_mono(i, j, nvars)))
        pm = [0] * nvars
        for v in range(nvars):
            dnum = sum(max(0, f.mono[v]) for f in num)
            dden = sum(max(0, f.mono[v]) for f in den)
            pm[v] = dden - dnum - rng.choice([0, 0, 0, 1])
        F = FactorProduct(nvars, tuple(num), tuple(den), pre_mono=tuple(pm))
        try:
            return F, ct_iterated_pf(F)
        except (PositiveDegree, DuplicateFactor, ValueError):
            continue
