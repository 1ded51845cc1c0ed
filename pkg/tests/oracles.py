"""Independent reference implementations used to cross-check the library.

Everything here evaluates the literal defining formulas with per-leaf
loops, deliberately avoiding the bottom-up tables and span accumulation
the package uses, so agreement is meaningful.
"""

from fractions import Fraction

from dyadicops import DyadicInterval, Exact, StepFunction, interval_family
from dyadicops.scalars import RATIONAL, zero as scalar_zero, one as scalar_one


def leaf_interval(leaf: int, depth: int) -> DyadicInterval:
    return DyadicInterval(depth, leaf)


def naive_haar(interval: DyadicInterval, leaf: int, depth: int, mode=RATIONAL):
    """Literal piecewise definition of the Haar function on one leaf."""
    width = 1 << (depth - interval.level)
    start = interval.position * width
    if not start <= leaf < start + width:
        return scalar_zero(mode)
    if mode == RATIONAL:
        mag = Exact.root2_power(interval.level)
    else:
        mag = 2.0 ** (interval.level / 2)
    return mag if leaf >= start + width // 2 else -mag


def naive_integral(f: StepFunction, interval: DyadicInterval):
    acc = scalar_zero(f.mode)
    for leaf in interval.leaf_span(f.depth):
        acc = acc + f.values[leaf]
    if f.mode == RATIONAL:
        return acc * Fraction(1, 1 << f.depth)
    return acc / (1 << f.depth)


def naive_average(f: StepFunction, interval: DyadicInterval):
    if f.mode == RATIONAL:
        return naive_integral(f, interval) * (1 << interval.level)
    return naive_integral(f, interval) * float(1 << interval.level)


def naive_coefficient(f: StepFunction, interval: DyadicInterval):
    """<f, h_I> summed leaf by leaf."""
    acc = scalar_zero(f.mode)
    for leaf in range(1 << f.depth):
        acc = acc + f.values[leaf] * naive_haar(interval, leaf, f.depth, f.mode)
    if f.mode == RATIONAL:
        return acc * Fraction(1, 1 << f.depth)
    return acc / (1 << f.depth)


def naive_pairing(f: StepFunction, interval: DyadicInterval, bit: int):
    return naive_coefficient(f, interval) if bit == 0 else naive_average(f, interval)


def naive_haar_power_value(interval, leaf, sigma, depth, mode=RATIONAL):
    if sigma == 0:
        return scalar_one(mode)
    v = scalar_one(mode)
    h = naive_haar(interval, leaf, depth, mode)
    for _ in range(sigma):
        v = v * h
    return v


def naive_paraproduct(bits, fs, eps_value=None) -> StepFunction:
    """Triple loop over intervals and leaves, straight from the definition."""
    depth, mode = fs[0].depth, fs[0].mode
    sigma = list(bits).count(0)
    vals = [scalar_zero(mode)] * (1 << depth)
    for interval in interval_family(depth):
        t = scalar_one(mode)
        for bit, f in zip(bits, fs):
            t = t * naive_pairing(f, interval, bit)
        if eps_value is not None:
            t = t * eps_value(interval)
        for leaf in range(1 << depth):
            vals[leaf] = vals[leaf] + t * naive_haar_power_value(
                interval, leaf, sigma, depth, mode
            )
    return StepFunction(depth, tuple(vals), mode)


def naive_maximal(f: StepFunction) -> StepFunction:
    absf = f.abs()
    vals = []
    for leaf in range(1 << f.depth):
        chain = [DyadicInterval(lvl, leaf >> (f.depth - lvl)) for lvl in range(f.depth + 1)]
        vals.append(max(naive_average(absf, i) for i in chain))
    return StepFunction(f.depth, tuple(vals), f.mode)


def naive_square_sq(f: StepFunction) -> StepFunction:
    vals = []
    for leaf in range(1 << f.depth):
        acc = scalar_zero(f.mode)
        for lvl in range(f.depth):
            i = DyadicInterval(lvl, leaf >> (f.depth - lvl))
            c = naive_coefficient(f, i)
            acc = acc + c * c * (1 << lvl)
        vals.append(acc)
    return StepFunction(f.depth, tuple(vals), f.mode)


def naive_bmo_pow(b: StepFunction, r: int):
    best = scalar_zero(b.mode)
    for lvl in range(b.depth + 1):
        for pos in range(1 << lvl):
            i = DyadicInterval(lvl, pos)
            m = naive_average(b, i)
            acc = scalar_zero(b.mode)
            for leaf in i.leaf_span(b.depth):
                d = abs(b.values[leaf] - m)
                acc = acc + (d if r == 1 else d * d)
            if b.mode == RATIONAL:
                val = acc * Fraction(1, len(i.leaf_span(b.depth)))
            else:
                val = acc / len(i.leaf_span(b.depth))
            if val > best:
                best = val
    return best


def random_rationals(rng, count, numer=16, denom=8):
    return [Fraction(rng.randint(-numer, numer), rng.randint(1, denom)) for _ in range(count)]
