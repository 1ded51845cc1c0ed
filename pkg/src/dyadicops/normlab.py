"""Randomized lower-bound search for operator norms, with the sharp test
families from the boundedness proofs appended as dedicated trials.

Experiments run in float64 mode.  Every trial is seeded independently from
(seed, trial index), so reports are byte-identical across runs and
independent of evaluation order; enabling the thread pool cannot change
the result.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__, scalars
from .core import (
    DyadicInterval,
    StepFunction,
    _weak_candidates,
    interval_family,
    lp_norm,
)
from .errors import ResolutionError, ShapeError
from .multipliers import SymbolSequence, commutator, multilinear_multiplier
from .paraproducts import AlphaVector, _as_alpha, paraproduct, pi_paraproduct
from .scalars import FLOAT64, RATIONAL
from .sublinear import bmo_norm, bstar_seminorm

KINDS = ("paraproduct", "pi_paraproduct", "multilinear_multiplier", "commutator")
FAMILIES = ("random-step", "rademacher-haar", "indicator", "extremal")


@dataclass(frozen=True)
class ExponentTuple:
    """Input exponents p_1..p_m; the output exponent r solves
    1/r = sum of 1/p_j."""

    p: tuple[Fraction, ...]

    def __post_init__(self):
        ps = tuple(Fraction(x) for x in self.p)
        if not ps:
            raise ValueError("need at least one exponent")
        if any(x < 1 for x in ps):
            raise ValueError(f"every exponent must be >= 1, got {ps}")
        object.__setattr__(self, "p", ps)

    @classmethod
    def from_string(cls, s: str) -> "ExponentTuple":
        return cls(tuple(Fraction(part.strip()) for part in s.split(",")))

    @property
    def m(self) -> int:
        return len(self.p)

    @property
    def r(self) -> Fraction:
        return 1 / sum(Fraction(1, 1) / x for x in self.p)

    def q_chain(self) -> list[Fraction | None]:
        """q_k with 1/q_k = (k-1) + sum over j > k of 1/p_j; None is
        infinity."""
        out = []
        for k in range(1, self.m + 1):
            inv = Fraction(k - 1) + sum(
                (Fraction(1, 1) / x for x in self.p[k:]), Fraction(0)
            )
            out.append(None if inv == 0 else 1 / inv)
        return out

    def weak_target(self, k: int) -> Fraction:
        """q_k / (q_k + 1): the weak output exponent when the first k
        inputs sit in L^1."""
        q = self.q_chain()[k - 1]
        if q is None:
            return Fraction(1)
        return q / (q + 1)

    def to_json_dict(self) -> dict:
        return {"p": [str(x) for x in self.p], "r": str(self.r)}


@dataclass(frozen=True)
class OperatorDescriptor:
    """Which operator a norm experiment drives.

    kind is one of {paraproduct, pi_paraproduct, multilinear_multiplier,
    commutator}; b is the symbol function (pi, commutator), symbol the
    multiplier sequence (multiplier, commutator), slot the 1-based
    commutator slot.
    """

    kind: str
    alpha: AlphaVector
    b: StepFunction | None = None
    symbol: SymbolSequence | None = None
    slot: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "alpha", _as_alpha(self.alpha))
        if self.kind == "paraproduct":
            if self.b is not None or self.symbol is not None or self.slot is not None:
                raise ValueError("paraproduct descriptors take only alpha")
        elif self.kind == "pi_paraproduct":
            if self.b is None:
                raise ValueError("pi_paraproduct descriptors need b")
            if self.symbol is not None or self.slot is not None:
                raise ValueError("pi_paraproduct descriptors take no symbol/slot")
        elif self.kind == "multilinear_multiplier":
            if self.symbol is None:
                raise ValueError("multiplier descriptors need a symbol sequence")
            if not self.alpha.is_admissible:
                raise ValueError("multiplier alpha must contain a zero bit")
            if self.b is not None or self.slot is not None:
                raise ValueError("multiplier descriptors take no b/slot")
        elif self.kind == "commutator":
            if self.b is None or self.symbol is None or self.slot is None:
                raise ValueError("commutator descriptors need b, symbol, and slot")
            if not self.alpha.is_admissible:
                raise ValueError("commutator alpha must contain a zero bit")
            if not 1 <= self.slot <= self.alpha.m:
                raise ValueError(
                    f"slot must be in 1..{self.alpha.m}, got {self.slot}"
                )

    @property
    def arity(self) -> int:
        return self.alpha.m

    def as_float64(self) -> "OperatorDescriptor":
        if self.b is None or self.b.mode == FLOAT64:
            return self
        return OperatorDescriptor(
            kind=self.kind,
            alpha=self.alpha,
            b=self.b.as_float64(),
            symbol=self.symbol,
            slot=self.slot,
        )

    def apply(self, fs: Sequence[StepFunction]) -> StepFunction:
        if self.kind == "paraproduct":
            return paraproduct(self.alpha, fs)
        if self.kind == "pi_paraproduct":
            return pi_paraproduct(self.alpha, self.b, fs)
        if self.kind == "multilinear_multiplier":
            return multilinear_multiplier(self.symbol, self.alpha, fs)
        return commutator(self.slot, self.b, self.symbol, self.alpha, fs)

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "alpha": str(self.alpha),
            "sigma": self.alpha.zero_count,
        }
        if self.slot is not None:
            out["slot"] = self.slot
        if self.symbol is not None:
            out["symbol"] = self.symbol.to_json_dict()
        if self.b is not None:
            out["b"] = self.b.to_json_dict()
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "OperatorDescriptor":
        return cls(
            kind=obj["kind"],
            alpha=AlphaVector.from_string(obj["alpha"]),
            b=StepFunction.from_json_dict(obj["b"]) if "b" in obj else None,
            symbol=SymbolSequence.from_json_dict(obj["symbol"])
            if "symbol" in obj
            else None,
            slot=obj.get("slot"),
        )


# -- samplers -------------------------------------------------------------------


def random_rational_step(rng: random.Random, depth: int) -> StepFunction:
    """A rational-mode function with small random fractions as leaf values."""
    vals = [
        Fraction(rng.randint(-24, 24), rng.randint(1, 12))
        for _ in range(1 << depth)
    ]
    return StepFunction(depth, tuple(vals), RATIONAL)


@dataclass(frozen=True)
class SamplerSpec:
    """How trial inputs are drawn.

    Families: random-step (uniform leaf values in [-1, 1]), rademacher-haar
    (unit +-1 Haar coefficients up to level_cap, zero mean), indicator
    (L^p-normalized indicator of a random interval), extremal (the sharp
    family for the operator at a random interval).
    """

    family: str
    depth: int
    seed: int = 0
    level_cap: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.level_cap is not None and not 0 <= self.level_cap < self.depth:
            raise ValueError(
                f"level_cap must lie in 0..{self.depth - 1}, got {self.level_cap}"
            )

    def _rng(self, trial: int) -> random.Random:
        # string seeding is stable across processes (no hash randomization)
        return random.Random(f"{self.seed}:{trial}")

    def _random_interval(self, rng: random.Random) -> DyadicInterval:
        level = rng.randrange(self.depth)
        return DyadicInterval(level, rng.randrange(1 << level))

    def draw_tuple(
        self,
        trial: int,
        descriptor: OperatorDescriptor,
        exponents: ExponentTuple,
    ) -> list[StepFunction] | None:
        """The input tuple for one trial; None when no draw applies."""
        rng = self._rng(trial)
        m = descriptor.arity
        n = 1 << self.depth
        if self.family == "random-step":
            return [
                StepFunction._raw(
                    self.depth, [rng.uniform(-1.0, 1.0) for _ in range(n)], FLOAT64
                )
                for _ in range(m)
            ]
        if self.family == "rademacher-haar":
            cap = self.level_cap if self.level_cap is not None else self.depth - 1
            out = []
            for _ in range(m):
                vals = [0.0] * n
                for level in range(cap + 1):
                    mag = 2.0 ** (level / 2.0)
                    width = 1 << (self.depth - level)
                    half = width >> 1
                    for pos in range(1 << level):
                        c = rng.choice((-1.0, 1.0)) * mag
                        start = pos * width
                        for leaf in range(start, start + half):
                            vals[leaf] -= c
                        for leaf in range(start + half, start + width):
                            vals[leaf] += c
                out.append(StepFunction._raw(self.depth, vals, FLOAT64))
            return out
        if self.family == "indicator":
            out = []
            for j in range(m):
                interval = self._random_interval(rng)
                scale = 2.0 ** (interval.level / float(exponents.p[j]))
                out.append(
                    StepFunction.indicator(interval, self.depth, FLOAT64).scale(scale)
                )
            return out
        # extremal: the sharp family at a random interval
        interval = self._random_interval(rng)
        return extremal_tuple(descriptor, exponents, interval, self.depth)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "depth": self.depth,
            "seed": self.seed,
            "level_cap": self.level_cap,
        }


# -- sharp families --------------------------------------------------------------


def extremal_multiplier_family(
    interval: DyadicInterval, alpha, depth: int, mode: str = FLOAT64
) -> list[StepFunction]:
    """Haar function in the zero slots, plain indicator in the others; the
    measured ratio for the eps-multiplier is exactly |eps_I|."""
    a = _as_alpha(alpha)
    if interval.level >= depth:
        raise ResolutionError(
            f"no Haar function at level {interval.level} on a depth-{depth} grid"
        )
    h = StepFunction.haar(interval, depth, mode)
    ind = StepFunction.indicator(interval, depth, mode)
    return [h if bit == 0 else ind for bit in a.bits]


def _scale_pow2(exponent: Fraction, mode: str):
    """2**exponent; exact in rational mode for half-integer exponents."""
    if mode == FLOAT64:
        return 2.0 ** float(exponent)
    doubled = exponent * 2
    if doubled.denominator != 1:
        raise ValueError(
            f"2**{exponent} is not exactly representable in rational mode"
        )
    return scalars.root2_power(doubled.numerator, RATIONAL)


def extremal_pi_family(
    interval: DyadicInterval,
    alpha,
    exponents: ExponentTuple,
    depth: int,
    mode: str = FLOAT64,
) -> list[StepFunction]:
    """L^p-normalized sharp family for the symbol paraproduct: scaled Haar
    functions in the zero slots, scaled indicators in the others.

    When alpha has more than one zero bit the measured L^r ratio equals
    |<b, h_J>| / sqrt(|J|) exactly.
    """
    a = _as_alpha(alpha)
    if len(exponents.p) != a.m:
        raise ShapeError(
            f"alpha has {a.m} slots but got {len(exponents.p)} exponents"
        )
    if interval.level >= depth:
        raise ResolutionError(
            f"no Haar function at level {interval.level} on a depth-{depth} grid"
        )
    level = interval.level
    out = []
    for bit, p in zip(a.bits, exponents.p):
        if bit == 0:
            scale = _scale_pow2(-level * (Fraction(1, 2) - 1 / p), mode)
            out.append(StepFunction.haar(interval, depth, mode).scale(scale))
        else:
            scale = _scale_pow2(Fraction(level) / p, mode)
            out.append(StepFunction.indicator(interval, depth, mode).scale(scale))
    return out


def necessity_case(alpha, slot: int) -> str:
    """Which sharp commutator family applies: "I" when the slot is a Haar
    slot and it is the only one, else "II"."""
    a = _as_alpha(alpha)
    if not 1 <= slot <= a.m:
        raise ValueError(f"slot must be in 1..{a.m}, got {slot}")
    if a.bits[slot - 1] == 0 and a.zero_count == 1:
        return "I"
    return "II"


def commutator_necessity_family(
    case: str,
    interval: DyadicInterval,
    alpha,
    slot: int,
    depth: int,
    mode: str = FLOAT64,
) -> list[StepFunction]:
    """The sharp input tuple for the slot commutator at one interval.

    Case II (slot is an average slot, or there are other Haar slots): Haar
    function / indicator of the interval by slot type; the measured ratio
    is |I|**(-1/r) times the L^r oscillation of b on I.  Case I (the slot
    is the unique Haar slot): indicator of the interval in that slot and
    the Haar function of the parent elsewhere; the plain operator then
    vanishes and the commutator reduces to the Haar sum of b inside the
    interval.
    """
    a = _as_alpha(alpha)
    expected = necessity_case(a, slot)
    if case not in ("I", "II"):
        raise ValueError(f"case must be 'I' or 'II', got {case!r}")
    if case != expected:
        raise ValueError(
            f"alpha {a} with slot {slot} admits case {expected}, not {case}"
        )
    if case == "II":
        if interval.level >= depth:
            raise ResolutionError(
                f"no Haar function at level {interval.level} on a "
                f"depth-{depth} grid"
            )
        h = StepFunction.haar(interval, depth, mode)
        ind = StepFunction.indicator(interval, depth, mode)
        return [h if bit == 0 else ind for bit in a.bits]
    if a.m < 2:
        raise ValueError("case I needs at least two slots")
    if interval.level < 1:
        raise ValueError("case I needs an interval with a parent")
    if interval.level >= depth:
        raise ResolutionError(
            f"interval at level {interval.level} leaves no Haar sum on a "
            f"depth-{depth} grid"
        )
    parent = interval.parent()
    h_parent = StepFunction.haar(parent, depth, mode)
    out = [h_parent] * a.m
    out[slot - 1] = StepFunction.indicator(interval, depth, mode)
    return out


def extremal_tuple(
    descriptor: OperatorDescriptor,
    exponents: ExponentTuple,
    interval: DyadicInterval,
    depth: int,
) -> list[StepFunction] | None:
    """The sharp family for the descriptor at one interval, or None when
    the interval does not support it."""
    kind = descriptor.kind
    if kind in ("paraproduct", "multilinear_multiplier"):
        return extremal_multiplier_family(interval, descriptor.alpha, depth)
    if kind == "pi_paraproduct":
        return extremal_pi_family(interval, descriptor.alpha, exponents, depth)
    case = necessity_case(descriptor.alpha, descriptor.slot)
    if case == "I" and (interval.level < 1 or descriptor.alpha.m < 2):
        return None
    return commutator_necessity_family(
        case, interval, descriptor.alpha, descriptor.slot, depth
    )


# -- experiments -----------------------------------------------------------------


def _lr_quasinorm(f: StepFunction, r: Fraction) -> float:
    """(mean of |f|**r) ** (1/r); a norm for r >= 1, a quasinorm below."""
    rf = float(r)
    total = sum(abs(v) ** rf for v in f.values) / len(f.values)
    return total ** (1.0 / rf)


def _weak_lr_quasinorm(f: StepFunction, r: Fraction) -> float:
    rf = float(r)
    candidates = _weak_candidates(f)
    if not candidates:
        return 0.0
    return max(float(v) * float(m) ** (1.0 / rf) for v, m in candidates)


@dataclass(frozen=True)
class ExperimentReport:
    descriptor: OperatorDescriptor
    exponents: ExponentTuple
    sampler: SamplerSpec
    trials: int
    best_ratio: float
    best_trial: int | None
    extremal_lower_bound: float | None
    weak_type: bool
    b_norms: dict | None
    mode: str
    trial_ratios: tuple = field(default_factory=tuple, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "artifact_version": __version__,
            "grid": {"depth": self.sampler.depth},
            "descriptor": self.descriptor.to_json_dict(),
            "exponents": self.exponents.to_json_dict(),
            "sampler": self.sampler.to_json_dict(),
            "trials": self.trials,
            "best_ratio": self.best_ratio,
            "best_trial": self.best_trial,
            "extremal_lower_bound": self.extremal_lower_bound,
            "weak_type": self.weak_type,
            "b_norms": self.b_norms,
            "mode": self.mode,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def trials_csv(self) -> str:
        lines = ["trial,ratio"]
        for index, ratio in self.trial_ratios:
            if ratio is not None:
                lines.append(f"{index},{ratio!r}")
        return "\n".join(lines) + "\n"


def _run_experiment(
    descriptor: OperatorDescriptor,
    exponents: ExponentTuple,
    sampler: SamplerSpec,
    trials: int,
    weak: bool,
    workers: int | None,
) -> ExperimentReport:
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if exponents.m != descriptor.arity:
        raise ShapeError(
            f"descriptor arity {descriptor.arity} vs {exponents.m} exponents"
        )
    if weak and all(p != 1 for p in exponents.p):
        raise ValueError("weak-type experiments need some exponent equal to 1")
    desc = descriptor.as_float64()
    if desc.b is not None and desc.b.depth != sampler.depth:
        raise ShapeError(
            f"b lives on depth {desc.b.depth} but the sampler uses "
            f"depth {sampler.depth}"
        )
    r = exponents.r
    out_norm = _weak_lr_quasinorm if weak else _lr_quasinorm

    def measure(fs: list[StepFunction] | None) -> float | None:
        if fs is None:
            return None
        norms = [lp_norm(f, p) for f, p in zip(fs, exponents.p)]
        if any(n == 0.0 for n in norms):
            return None
        value = out_norm(desc.apply(fs), r)
        for n in norms:
            value /= n
        return value

    jobs: list = [
        ("random", trial) for trial in range(trials)
    ]
    for interval in interval_family(sampler.depth):
        jobs.append(("extremal", interval))

    def run_job(job) -> float | None:
        if job[0] == "random":
            return measure(sampler.draw_tuple(job[1], desc, exponents))
        return measure(extremal_tuple(desc, exponents, job[1], sampler.depth))

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(job) for job in jobs]

    ratios = list(enumerate(results))
    best_ratio = 0.0
    best_trial: int | None = None
    for index, ratio in ratios:
        if ratio is not None and (best_trial is None or ratio > best_ratio):
            best_ratio, best_trial = ratio, index
    extremal_ratios = [r for (i, r) in ratios[trials:] if r is not None]
    extremal_lower_bound = max(extremal_ratios) if extremal_ratios else None

    b_norms = None
    if desc.b is not None:
        b_norms = {
            "bmo1": float(bmo_norm(desc.b, 1)),
            "bmo2": float(bmo_norm(desc.b, 2)),
            "bstar": float(bstar_seminorm(desc.b)),
        }

    return ExperimentReport(
        descriptor=desc,
        exponents=exponents,
        sampler=sampler,
        trials=trials,
        best_ratio=best_ratio,
        best_trial=best_trial,
        extremal_lower_bound=extremal_lower_bound,
        weak_type=weak,
        b_norms=b_norms,
        mode=FLOAT64,
        trial_ratios=tuple(ratios),
    )


def estimate_operator_norm(
    descriptor: OperatorDescriptor,
    exponents: ExponentTuple,
    sampler: SamplerSpec,
    trials: int,
    workers: int | None = None,
) -> ExperimentReport:
    """Monte-Carlo lower bound for the L^{p_1} x ... x L^{p_m} -> L^r
    operator norm; the sharp families at every interval are always
    appended as extra trials, so best_ratio >= extremal_lower_bound."""
    return _run_experiment(descriptor, exponents, sampler, trials, False, workers)


def weak_type_ratio(
    descriptor: OperatorDescriptor,
    exponents: ExponentTuple,
    sampler: SamplerSpec,
    trials: int,
    workers: int | None = None,
) -> ExperimentReport:
    """Same search against the weak-L^r quasinorm; needs some p_j = 1."""
    return _run_experiment(descriptor, exponents, sampler, trials, True, workers)
