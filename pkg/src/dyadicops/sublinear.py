"""Sublinear companions: maximal function, square function, BMO, and the
stopping-time decomposition at a given height."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import scalars
from .core import (
    DyadicInterval,
    StepFunction,
    UNIVERSE,
    average_table,
    coefficient_table,
    interval_integrals,
)
from .errors import RootExceedsHeight
from .scalars import FLOAT64, RATIONAL


def maximal(f: StepFunction) -> StepFunction:
    """Dyadic maximal function: at each point, the largest average of |f|
    over the containing intervals (universe through leaf)."""
    avgs = average_table(f.abs())
    best = avgs[0]
    for level in range(1, f.depth + 1):
        row = avgs[level]
        best = [max(best[k >> 1], row[k]) for k in range(len(row))]
    return StepFunction._raw(f.depth, best, f.mode)


def square_function_sq(f: StepFunction) -> StepFunction:
    """Pointwise square of the Haar square function; exact in rational mode."""
    coeffs = coefficient_table(f)
    acc = [scalars.zero(f.mode)] * (1 << f.depth)
    for level in range(f.depth):
        scale = 1 << level  # 1/|I|
        row = coeffs[level]
        width = 1 << (f.depth - level)
        for k in range(1 << level):
            c = row[k]
            if not c:
                continue
            term = c * c * scale
            start = k * width
            for leaf in range(start, start + width):
                acc[leaf] = acc[leaf] + term
    return StepFunction._raw(f.depth, acc, f.mode)


def square_function(f: StepFunction) -> StepFunction:
    """Haar square function Sf.

    In rational mode the result stays exact when every leaf value has an
    exact square root; otherwise the whole result is returned in float64
    mode.
    """
    sq = square_function_sq(f)
    if f.mode == FLOAT64:
        return StepFunction._raw(f.depth, [math.sqrt(v) for v in sq.values], FLOAT64)
    roots = [v.sqrt() for v in sq.values]
    if all(r is not None for r in roots):
        return StepFunction._raw(f.depth, roots, RATIONAL)
    return StepFunction._raw(
        f.depth, [float(v) ** 0.5 for v in sq.values], FLOAT64
    )


def _oscillation_pow(b: StepFunction, r: int) -> list[list]:
    """table[level][pos] = average over the interval of |b - <b>_I|**r."""
    n = 1 << b.depth
    avgs = average_table(b)
    if r == 2:
        # <(b - m)^2>_I = <b^2>_I - m^2, no leaf scan needed
        sq_avgs = average_table(b * b)
        return [
            [sq_avgs[lvl][k] - avgs[lvl][k] * avgs[lvl][k] for k in range(1 << lvl)]
            for lvl in range(b.depth + 1)
        ]
    out = []
    for lvl in range(b.depth + 1):
        width = 1 << (b.depth - lvl)
        row = []
        for k in range(1 << lvl):
            m = avgs[lvl][k]
            start = k * width
            acc = scalars.zero(b.mode)
            for leaf in range(start, start + width):
                acc = acc + abs(b.values[leaf] - m)
            if b.mode == RATIONAL:
                row.append(acc * Fraction(1, width))
            else:
                row.append(acc / width)
        out.append(row)
    return out


def bmo_norm_pow(b: StepFunction, r: int):
    """sup over intervals of the r-th power mean oscillation, r in {1, 2}.

    Exact in rational mode; this is ||b||_{BMO_r} ** r.
    """
    if r not in (1, 2):
        raise ValueError(f"BMO exponent must be 1 or 2, got {r}")
    table = _oscillation_pow(b, r)
    return max(v for row in table for v in row)


def bmo_norm(b: StepFunction, r: int):
    """Dyadic BMO norm with r-th power means, r in {1, 2}.

    For r = 2 in rational mode the value is exact when the square root
    exists in the scalar field and a float otherwise; use bmo_norm_pow for
    guaranteed-exact comparisons.
    """
    top = bmo_norm_pow(b, r)
    if r == 1:
        return top
    return scalars.scalar_sqrt(top, b.mode)


def bmo2_via_haar_sq(b: StepFunction):
    """sup over intervals I of |I|**-1 * sum of squared Haar coefficients of
    the subintervals of I; exact in rational mode."""
    coeffs = coefficient_table(b)
    # bottom-up subtree sums of squared coefficients
    subtree = [c * c for c in coeffs[b.depth - 1]]
    best = max(
        (s * (1 << (b.depth - 1)) for s in subtree),
        default=scalars.zero(b.mode),
    )
    for level in range(b.depth - 2, -1, -1):
        row = coeffs[level]
        subtree = [
            row[k] * row[k] + subtree[2 * k] + subtree[2 * k + 1]
            for k in range(1 << level)
        ]
        scale = 1 << level
        for s in subtree:
            cand = s * scale
            if cand > best:
                best = cand
    return best


def bmo2_via_haar(b: StepFunction):
    """Same value as bmo_norm(b, 2), computed from Haar coefficients."""
    return scalars.scalar_sqrt(bmo2_via_haar_sq(b), b.mode)


def bstar_seminorm(b: StepFunction):
    """sup over intervals of |<b, h_I>| / sqrt(|I|); exact in rational mode."""
    coeffs = coefficient_table(b)
    best = scalars.zero(b.mode)
    for level in range(b.depth):
        mag = scalars.root2_power(level, b.mode)
        for c in coeffs[level]:
            cand = abs(c) * mag
            if cand > best:
                best = cand
    return best


@dataclass(frozen=True)
class CZDecomposition:
    """Split of f at a height: a bounded part plus localized zero-mean parts.

    ``good`` equals f outside the selected intervals and the average of f on
    each of them; each part is (interval, b_j) with b_j = (f - <f>_I) 1_I.
    """

    height: object
    good: StepFunction
    parts: tuple

    @property
    def intervals(self) -> tuple[DyadicInterval, ...]:
        return tuple(i for i, _ in self.parts)

    def bad(self) -> StepFunction:
        out = StepFunction.zeros(self.good.depth, self.good.mode)
        for _, b in self.parts:
            out = out + b
        return out

    def reconstruct(self) -> StepFunction:
        return self.good + self.bad()

    def to_json_dict(self) -> dict:
        return {
            "height": scalars.encode_value(self.height, self.good.mode),
            "good": self.good.to_json_dict(),
            "parts": [
                {
                    "interval": {"level": i.level, "pos": i.position},
                    "b": b.to_json_dict(),
                }
                for i, b in self.parts
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CZDecomposition":
        good = StepFunction.from_json_dict(obj["good"])
        parts = tuple(
            (
                DyadicInterval(int(p["interval"]["level"]), int(p["interval"]["pos"])),
                StepFunction.from_json_dict(p["b"]),
            )
            for p in obj.get("parts", [])
        )
        return cls(scalars.decode_value(obj["height"], good.mode), good, parts)


def cz_decompose(f: StepFunction, height) -> CZDecomposition:
    """Stopping-time decomposition at the given height.

    Selects the maximal intervals whose |f|-average strictly exceeds the
    height (ties are not selected).  Requires the global average of |f| to
    be at most the height.
    """
    h = scalars.coerce(height, f.mode)
    if not h > scalars.zero(f.mode):
        raise ValueError("height must be positive")
    avgs = average_table(f.abs())
    if avgs[0][0] > h:
        raise RootExceedsHeight(
            "the global average of |f| already exceeds the height"
        )
    signed = average_table(f)

    selected: list[DyadicInterval] = []

    def descend(level: int, pos: int):
        if avgs[level][pos] > h:
            selected.append(DyadicInterval(level, pos))
            return
        if level == f.depth:
            return
        descend(level + 1, 2 * pos)
        descend(level + 1, 2 * pos + 1)

    if f.depth > 0:
        descend(1, 0)
        descend(1, 1)

    good_vals = list(f.values)
    parts = []
    z = scalars.zero(f.mode)
    for interval in selected:
        m = signed[interval.level][interval.position]
        b_vals = [z] * (1 << f.depth)
        for leaf in interval.leaf_span(f.depth):
            b_vals[leaf] = f.values[leaf] - m
            good_vals[leaf] = m
        parts.append((interval, StepFunction._raw(f.depth, b_vals, f.mode)))

    good = StepFunction._raw(f.depth, good_vals, f.mode)
    return CZDecomposition(h, good, tuple(parts))
