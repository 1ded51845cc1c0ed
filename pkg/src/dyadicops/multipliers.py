"""Haar multipliers, their multilinear variants, and commutators with a
multiplying function.

Sign convention used throughout: the commutator in slot i is

    [b, T]_i(f_1, ..., f_m) = T(f_1, ..., b*f_i, ..., f_m) - b * T(f_1, ..., f_m)

(multiply inside first, then subtract b times the plain output).  Swapping
the convention only flips the sign of the result, so every norm statement
is unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import scalars
from .core import DyadicInterval, HaarSpectrum, StepFunction, analyze, synthesize
from .errors import ShapeError
from .paraproducts import (
    AlphaVector,
    _as_alpha,
    _check_tuple,
    _engine,
    _slot_tables,
)
from .scalars import FLOAT64, RATIONAL

COMMUTATOR_CONVENTION = "T(f_1,...,b*f_i,...,f_m) - b*T(f_1,...,f_m)"


@dataclass(frozen=True)
class SymbolSequence:
    """A bounded family of numbers indexed by dyadic intervals.

    ``entries`` overrides ``default`` on the listed intervals.  Values are
    stored as given (int, Fraction, Exact, or float) and coerced to the
    computation mode when the symbol is applied.
    """

    default: object = 0
    entries: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, value) -> "SymbolSequence":
        return cls(default=value)

    def value(self, interval: DyadicInterval):
        return self.entries.get(interval, self.default)

    def sup_norm(self) -> float:
        best = abs(float(self.default))
        for v in self.entries.values():
            best = max(best, abs(float(v)))
        return best

    def table(self, depth: int, mode: str) -> list[list]:
        """Per-(level, pos) coerced values for a depth-``depth`` grid."""
        return [
            [
                scalars.coerce(self.value(DyadicInterval(level, pos)), mode)
                for pos in range(1 << level)
            ]
            for level in range(depth)
        ]

    def to_json_dict(self) -> dict:
        def enc(v):
            if isinstance(v, float):
                return v
            return scalars.encode_value(scalars.coerce(v, RATIONAL), RATIONAL)

        return {
            "default": enc(self.default),
            "entries": [
                {"level": i.level, "pos": i.position, "value": enc(v)}
                for i, v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SymbolSequence":
        def dec(v):
            if isinstance(v, float):
                return v
            if isinstance(v, int):
                return v
            return scalars.decode_value(v, RATIONAL)

        entries = {
            DyadicInterval(int(e["level"]), int(e["pos"])): dec(e["value"])
            for e in obj.get("entries", [])
        }
        return cls(dec(obj.get("default", 0)), entries)


def linear_multiplier(eps: SymbolSequence, f: StepFunction) -> StepFunction:
    """sum over intervals of eps_I * <f, h_I> * h_I (the global mean is
    dropped)."""
    spec = analyze(f)
    table = eps.table(f.depth, f.mode)
    scaled = {
        interval: table[interval.level][interval.position] * c
        for interval, c in spec.coeffs.items()
    }
    return synthesize(HaarSpectrum(f.depth, 0, scaled, f.mode))


def multilinear_multiplier(
    eps: SymbolSequence, alpha, fs: Sequence[StepFunction]
) -> StepFunction:
    """Haar multiplier with slot structure alpha: each interval's term is
    scaled by eps_I.  Alpha must have at least one zero bit."""
    a = _as_alpha(alpha)
    if not a.is_admissible:
        raise ValueError(
            "alpha must have at least one Haar slot (the all-ones vector "
            "gives no multiplier)"
        )
    if len(fs) != a.m:
        raise ShapeError(f"alpha has {a.m} slots but got {len(fs)} functions")
    depth, mode = _check_tuple(fs)
    return _engine(
        a.bits, _slot_tables(a.bits, fs), depth, mode, eps.table(depth, mode)
    )


def commutator(
    slot: int,
    b: StepFunction,
    eps: SymbolSequence,
    alpha,
    fs: Sequence[StepFunction],
) -> StepFunction:
    """[b, T]_slot(fs) with T the alpha multiplier for eps; slot is 1-based."""
    a = _as_alpha(alpha)
    if not 1 <= slot <= a.m:
        raise ValueError(f"slot must be in 1..{a.m}, got {slot}")
    if len(fs) != a.m:
        raise ShapeError(f"alpha has {a.m} slots but got {len(fs)} functions")
    b._check_compatible(fs[0])
    modified = list(fs)
    modified[slot - 1] = b * fs[slot - 1]
    inside = multilinear_multiplier(eps, a, modified)
    outside = b * multilinear_multiplier(eps, a, fs)
    return inside - outside


def commutator_linear(
    b: StepFunction, eps: SymbolSequence, f: StepFunction
) -> StepFunction:
    """[b, T_eps](f) = T_eps(b*f) - b*T_eps(f)."""
    b._check_compatible(f)
    return linear_multiplier(eps, b * f) - b * linear_multiplier(eps, f)
