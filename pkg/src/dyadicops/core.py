"""Dyadic grids on [0, 1): intervals, step functions, Haar transforms.

The universe is always [0, 1).  A grid of depth N has 2**N equal leaf
cells; a step function is constant on each leaf.  The Haar function of an
interval I is negative on the left half of I and positive on the right
half, with magnitude |I|**(-1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import scalars
from .errors import ResolutionError, ShapeError
from .scalars import FLOAT64, RATIONAL, Exact, check_mode


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The dyadic interval [position * 2**-level, (position+1) * 2**-level)."""

    level: int
    position: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if not 0 <= self.position < (1 << self.level):
            raise ValueError(
                f"position {self.position} out of range for level {self.level}"
            )

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    @property
    def is_universe(self) -> bool:
        return self.level == 0

    def parent(self) -> "DyadicInterval | None":
        if self.level == 0:
            return None
        return DyadicInterval(self.level - 1, self.position >> 1)

    def left_child(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.position)

    def right_child(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.position + 1)

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return self.left_child(), self.right_child()

    def sibling(self) -> "DyadicInterval":
        if self.level == 0:
            raise ValueError("the universe has no sibling")
        return DyadicInterval(self.level, self.position ^ 1)

    def is_right_half(self) -> bool:
        if self.level == 0:
            raise ValueError("the universe is not a half of anything")
        return bool(self.position & 1)

    def contains(self, other: "DyadicInterval") -> bool:
        """self contains other (possibly equal)."""
        if other.level < self.level:
            return False
        return (other.position >> (other.level - self.level)) == self.position

    def strictly_contains(self, other: "DyadicInterval") -> bool:
        return self.level < other.level and self.contains(other)

    def ancestors(self, include_self: bool = False) -> Iterator["DyadicInterval"]:
        """Walk upward toward the universe, strictly unless include_self."""
        cur = self if include_self else self.parent()
        while cur is not None:
            yield cur
            cur = cur.parent()

    def leaf_span(self, depth: int) -> range:
        """Indices of the leaves of a depth-``depth`` grid inside self."""
        if self.level > depth:
            raise ResolutionError(
                f"interval at level {self.level} is finer than depth {depth}"
            )
        width = 1 << (depth - self.level)
        return range(self.position * width, (self.position + 1) * width)

    def contains_leaf(self, leaf: int, depth: int) -> bool:
        if not 0 <= leaf < (1 << depth):
            raise ValueError(f"leaf {leaf} out of range for depth {depth}")
        if self.level > depth:
            raise ResolutionError(
                f"interval at level {self.level} is finer than depth {depth}"
            )
        return (leaf >> (depth - self.level)) == self.position

    def __str__(self):
        return f"({self.level},{self.position})"


UNIVERSE = DyadicInterval(0, 0)


def interval_family(depth: int) -> list[DyadicInterval]:
    """All intervals of levels 0..depth-1, i.e. those carrying a Haar
    function on a depth-``depth`` grid, in (level, position) order."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return [
        DyadicInterval(level, pos)
        for level in range(depth)
        for pos in range(1 << level)
    ]


def haar_eval(interval: DyadicInterval, leaf: int, depth: int, mode: str = RATIONAL):
    """Value of the Haar function of ``interval`` on one leaf.

    Negative (-2**(level/2)) on the left half, positive on the right half,
    zero outside.
    """
    check_mode(mode)
    if interval.level >= depth:
        raise ResolutionError(
            f"no Haar function at level {interval.level} on a depth-{depth} grid"
        )
    if not 0 <= leaf < (1 << depth):
        raise ValueError(f"leaf {leaf} out of range for depth {depth}")
    shift = depth - interval.level
    if (leaf >> shift) != interval.position:
        return scalars.zero(mode)
    magnitude = scalars.root2_power(interval.level, mode)
    right = (leaf >> (shift - 1)) & 1
    return magnitude if right else -magnitude


def _coerce_values(values: Iterable, mode: str) -> tuple:
    return tuple(scalars.coerce(v, mode) for v in values)


@dataclass(frozen=True)
class StepFunction:
    """A function on [0, 1) constant on the 2**depth leaf cells."""

    depth: int
    values: tuple
    mode: str = RATIONAL

    def __post_init__(self):
        check_mode(self.mode)
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        n = 1 << self.depth
        if len(self.values) != n:
            raise ShapeError(
                f"expected {n} leaf values for depth {self.depth}, "
                f"got {len(self.values)}"
            )
        object.__setattr__(self, "values", _coerce_values(self.values, self.mode))

    @classmethod
    def _raw(cls, depth: int, values: list, mode: str) -> "StepFunction":
        """Internal constructor: values must already be mode scalars."""
        f = object.__new__(cls)
        object.__setattr__(f, "depth", depth)
        object.__setattr__(f, "values", tuple(values))
        object.__setattr__(f, "mode", mode)
        return f

    @classmethod
    def from_values(cls, values: Sequence, mode: str = RATIONAL) -> "StepFunction":
        n = len(values)
        depth = n.bit_length() - 1
        if n < 2 or (1 << depth) != n:
            raise ShapeError(f"value count {n} is not a power of two >= 2")
        return cls(depth, tuple(values), mode)

    @classmethod
    def constant(cls, value, depth: int, mode: str = RATIONAL) -> "StepFunction":
        v = scalars.coerce(value, mode)
        return cls._raw(depth, [v] * (1 << depth), mode)

    @classmethod
    def zeros(cls, depth: int, mode: str = RATIONAL) -> "StepFunction":
        return cls.constant(0, depth, mode)

    @classmethod
    def indicator(
        cls, interval: DyadicInterval, depth: int, mode: str = RATIONAL
    ) -> "StepFunction":
        z, o = scalars.zero(mode), scalars.one(mode)
        vals = [z] * (1 << depth)
        for leaf in interval.leaf_span(depth):
            vals[leaf] = o
        return cls._raw(depth, vals, mode)

    @classmethod
    def haar(
        cls, interval: DyadicInterval, depth: int, mode: str = RATIONAL
    ) -> "StepFunction":
        if interval.level >= depth:
            raise ResolutionError(
                f"no Haar function at level {interval.level} on a "
                f"depth-{depth} grid"
            )
        z = scalars.zero(mode)
        mag = scalars.root2_power(interval.level, mode)
        vals = [z] * (1 << depth)
        span = interval.leaf_span(depth)
        half = len(span) // 2
        for i, leaf in enumerate(span):
            vals[leaf] = mag if i >= half else -mag
        return cls._raw(depth, vals, mode)

    # -- pointwise algebra --------------------------------------------------

    def _check_compatible(self, other: "StepFunction"):
        if self.depth != other.depth:
            raise ShapeError(f"depth mismatch: {self.depth} vs {other.depth}")
        if self.mode != other.mode:
            raise ShapeError(f"mode mismatch: {self.mode} vs {other.mode}")

    def __add__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        self._check_compatible(other)
        return StepFunction._raw(
            self.depth,
            [x + y for x, y in zip(self.values, other.values)],
            self.mode,
        )

    def __sub__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        self._check_compatible(other)
        return StepFunction._raw(
            self.depth,
            [x - y for x, y in zip(self.values, other.values)],
            self.mode,
        )

    def __neg__(self):
        return StepFunction._raw(self.depth, [-x for x in self.values], self.mode)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            self._check_compatible(other)
            return StepFunction._raw(
                self.depth,
                [x * y for x, y in zip(self.values, other.values)],
                self.mode,
            )
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, StepFunction):
            return NotImplemented
        return self.scale(other)

    def scale(self, scalar) -> "StepFunction":
        s = scalars.coerce(scalar, self.mode)
        return StepFunction._raw(self.depth, [s * x for x in self.values], self.mode)

    def abs(self) -> "StepFunction":
        return StepFunction._raw(self.depth, [abs(x) for x in self.values], self.mode)

    def restrict(self, interval: DyadicInterval) -> "StepFunction":
        """self times the indicator of ``interval``."""
        z = scalars.zero(self.mode)
        vals = [z] * (1 << self.depth)
        for leaf in interval.leaf_span(self.depth):
            vals[leaf] = self.values[leaf]
        return StepFunction._raw(self.depth, vals, self.mode)

    def is_zero(self) -> bool:
        return all(not v for v in self.values)

    def vanishes_outside(self, interval: DyadicInterval) -> bool:
        span = interval.leaf_span(self.depth)
        return all(
            not v for leaf, v in enumerate(self.values) if leaf not in span
        )

    def as_float64(self) -> "StepFunction":
        if self.mode == FLOAT64:
            return self
        return StepFunction._raw(
            self.depth, [float(v) for v in self.values], FLOAT64
        )

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "mode": self.mode,
            "values": [scalars.encode_value(v, self.mode) for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "StepFunction":
        mode = check_mode(obj.get("mode", RATIONAL))
        values = [scalars.decode_value(v, mode) for v in obj["values"]]
        return cls(int(obj["depth"]), tuple(values), mode)


@dataclass(frozen=True)
class HaarSpectrum:
    """Global mean plus one Haar coefficient per interval of the family.

    Coefficients that are exactly zero may be omitted from ``coeffs``;
    equality ignores the difference.
    """

    depth: int
    mean: object
    coeffs: dict
    mode: str = RATIONAL

    def __post_init__(self):
        check_mode(self.mode)
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "mean", scalars.coerce(self.mean, self.mode))
        cleaned = {}
        for interval, value in self.coeffs.items():
            if interval.level >= self.depth:
                raise ResolutionError(
                    f"coefficient at level {interval.level} does not fit a "
                    f"depth-{self.depth} grid"
                )
            v = scalars.coerce(value, self.mode)
            if v:
                cleaned[interval] = v
        object.__setattr__(self, "coeffs", cleaned)

    def coefficient(self, interval: DyadicInterval):
        if interval.level >= self.depth:
            raise ResolutionError(
                f"no coefficient at level {interval.level} on a "
                f"depth-{self.depth} grid"
            )
        return self.coeffs.get(interval, scalars.zero(self.mode))

    def __eq__(self, other):
        if not isinstance(other, HaarSpectrum):
            return NotImplemented
        return (
            self.depth == other.depth
            and self.mode == other.mode
            and self.mean == other.mean
            and self.coeffs == other.coeffs
        )

    def to_json_dict(self) -> dict:
        entries = [
            {
                "level": i.level,
                "pos": i.position,
                "value": scalars.encode_value(v, self.mode),
            }
            for i, v in sorted(self.coeffs.items())
        ]
        return {
            "depth": self.depth,
            "mode": self.mode,
            "mean": scalars.encode_value(self.mean, self.mode),
            "coeffs": entries,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "HaarSpectrum":
        mode = check_mode(obj.get("mode", RATIONAL))
        coeffs = {
            DyadicInterval(int(e["level"]), int(e["pos"])): scalars.decode_value(
                e["value"], mode
            )
            for e in obj.get("coeffs", [])
        }
        return cls(int(obj["depth"]), scalars.decode_value(obj["mean"], mode), coeffs, mode)


# -- integral tables ----------------------------------------------------------


def interval_integrals(f: StepFunction) -> list[list]:
    """table[level][pos] = integral of f over that interval, levels 0..depth."""
    n = 1 << f.depth
    if f.mode == RATIONAL:
        w = Fraction(1, n)
        level = [v * w for v in f.values]
    else:
        w = 1.0 / n
        level = [v * w for v in f.values]
    table = [level]
    while len(level) > 1:
        level = [level[2 * i] + level[2 * i + 1] for i in range(len(level) // 2)]
        table.append(level)
    table.reverse()
    return table


def average_table(f: StepFunction) -> list[list]:
    """table[level][pos] = average of f over that interval, levels 0..depth."""
    ints = interval_integrals(f)
    out = []
    for level, row in enumerate(ints):
        scale = 1 << level
        out.append([v * scale for v in row])
    return out


def coefficient_table(f: StepFunction) -> list[list]:
    """table[level][pos] = Haar coefficient <f, h_I>, levels 0..depth-1."""
    ints = interval_integrals(f)
    out = []
    for level in range(f.depth):
        mag = scalars.root2_power(level, f.mode)
        below = ints[level + 1]
        out.append(
            [mag * (below[2 * k + 1] - below[2 * k]) for k in range(1 << level)]
        )
    return out


# -- transforms ----------------------------------------------------------------


def analyze(f: StepFunction) -> HaarSpectrum:
    """Haar transform: global mean plus <f, h_I> for every interval."""
    ints = interval_integrals(f)
    coeffs = {}
    for level in range(f.depth):
        mag = scalars.root2_power(level, f.mode)
        below = ints[level + 1]
        for k in range(1 << level):
            c = mag * (below[2 * k + 1] - below[2 * k])
            if c:
                coeffs[DyadicInterval(level, k)] = c
    return HaarSpectrum(f.depth, ints[0][0], coeffs, f.mode)


def synthesize(spectrum: HaarSpectrum) -> StepFunction:
    """Inverse Haar transform: mean + sum of coeff * h_I."""
    depth, mode = spectrum.depth, spectrum.mode
    vals = [spectrum.mean] * (1 << depth)
    for interval, c in spectrum.coeffs.items():
        term = c * scalars.root2_power(interval.level, mode)
        span = interval.leaf_span(depth)
        half = len(span) // 2
        for i, leaf in enumerate(span):
            vals[leaf] = vals[leaf] + (term if i >= half else -term)
    return StepFunction._raw(depth, vals, mode)


def pairing(f: StepFunction, interval: DyadicInterval, alpha: int):
    """The two ways a function enters a paraproduct slot.

    alpha = 0 pairs with the Haar function (<f, h_I>); alpha = 1 takes the
    average over the interval.
    """
    if alpha not in (0, 1):
        raise ValueError(f"alpha bit must be 0 or 1, got {alpha}")
    depth, mode = f.depth, f.mode
    if alpha == 1:
        if interval.level > depth:
            raise ResolutionError(
                f"interval at level {interval.level} is finer than depth {depth}"
            )
        span = interval.leaf_span(depth)
        total = scalars.zero(mode)
        for leaf in span:
            total = total + f.values[leaf]
        if mode == RATIONAL:
            return total * Fraction(1, len(span))
        return total / len(span)
    if interval.level >= depth:
        raise ResolutionError(
            f"no Haar pairing at level {interval.level} on a depth-{depth} grid"
        )
    span = interval.leaf_span(depth)
    half = len(span) // 2
    acc = scalars.zero(mode)
    for i, leaf in enumerate(span):
        acc = (acc + f.values[leaf]) if i >= half else (acc - f.values[leaf])
    if mode == RATIONAL:
        return acc * Fraction(1, 1 << depth) * scalars.root2_power(interval.level, mode)
    return acc * (2.0 ** (interval.level / 2.0 - depth))


def inner_product(f: StepFunction, g: StepFunction):
    """Integral of f*g over [0, 1)."""
    f._check_compatible(g)
    acc = scalars.zero(f.mode)
    for x, y in zip(f.values, g.values):
        acc = acc + x * y
    if f.mode == RATIONAL:
        return acc * Fraction(1, 1 << f.depth)
    return acc / (1 << f.depth)


def pointwise_product(fs: Sequence[StepFunction]) -> StepFunction:
    if not fs:
        raise ShapeError("need at least one function")
    out = fs[0]
    for g in fs[1:]:
        out = out * g
    return out


# -- norms ---------------------------------------------------------------------


def _normalize_p(p) -> Fraction | None:
    """None encodes infinity."""
    if p == math.inf:
        return None
    q = Fraction(p)
    if q < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    return q


def lp_norm_pow(f: StepFunction, p):
    """||f||_p ** p with integer p (exact in rational mode); max |f| for p=inf."""
    q = _normalize_p(p)
    if q is None:
        return max(abs(v) for v in f.values)
    if q.denominator != 1:
        if f.mode == RATIONAL:
            raise ValueError(
                f"exact p-th powers need an integer exponent, got {q}"
            )
        return sum(abs(v) ** float(q) for v in f.values) / (1 << f.depth)
    k = q.numerator
    acc = scalars.zero(f.mode)
    for v in f.values:
        acc = acc + abs(v) ** k
    if f.mode == RATIONAL:
        return acc * Fraction(1, 1 << f.depth)
    return acc / (1 << f.depth)


def lp_norm(f: StepFunction, p):
    """The L^p norm, p in [1, inf].

    Float mode always returns a float.  Rational mode is exact for p = 1
    and p = inf, exact for p = 2 whenever the square root exists in the
    scalar field, and falls back to a float otherwise.
    """
    q = _normalize_p(p)
    if q is None:
        return max(abs(v) for v in f.values)
    if f.mode == FLOAT64:
        pf = float(q)
        total = sum(abs(v) ** pf for v in f.values) / (1 << f.depth)
        return total ** (1.0 / pf)
    if q == 1:
        return lp_norm_pow(f, 1)
    if q == 2:
        return scalars.scalar_sqrt(lp_norm_pow(f, 2), RATIONAL)
    if q.denominator == 1:
        return float(lp_norm_pow(f, q)) ** (1.0 / float(q))
    total = sum(abs(float(v)) ** float(q) for v in f.values) / (1 << f.depth)
    return total ** (1.0 / float(q))


def _weak_candidates(f: StepFunction):
    """Pairs (v, measure of {|f| >= v}) for the distinct nonzero |values|."""
    n = 1 << f.depth
    mags = sorted((abs(v) for v in f.values), reverse=True)
    out = []
    for count, v in enumerate(mags, start=1):
        if not v:
            break
        # the last occurrence of each distinct value carries the full count
        if count == n or mags[count] != v:
            if f.mode == RATIONAL:
                out.append((v, Fraction(count, n)))
            else:
                out.append((v, count / n))
    return out


def weak_lp_quasinorm(f: StepFunction, p):
    """sup over t > 0 of t * |{|f| > t}|**(1/p), attained at value jumps.

    Exact in rational mode for p = 1; computed in floats otherwise.
    """
    q = _normalize_p(p)
    if q is None:
        raise ValueError("weak quasinorm needs a finite exponent")
    candidates = _weak_candidates(f)
    if not candidates:
        return scalars.zero(f.mode)
    if f.mode == RATIONAL and q == 1:
        return max(v * m for v, m in candidates)
    pf = float(q)
    return max(float(v) * float(m) ** (1.0 / pf) for v, m in candidates)


def weak_lp_quasinorm_pow(f: StepFunction, p):
    """max over value jumps of v**p * |{|f| >= v}|, exact for integer p."""
    q = _normalize_p(p)
    if q is None or q.denominator != 1:
        raise ValueError(f"exact weak quasinorm powers need an integer p, got {p}")
    k = q.numerator
    candidates = _weak_candidates(f)
    if not candidates:
        return scalars.zero(f.mode)
    return max((v ** k) * m for v, m in candidates)
