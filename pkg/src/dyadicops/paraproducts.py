"""Multilinear paraproducts on a finite dyadic grid.

An m-linear paraproduct is indexed by a 0/1 vector alpha: slot j pairs its
function with the Haar function when alpha_j = 0 and takes the interval
average when alpha_j = 1.  Each interval contributes the product of its
slot values times the appropriate power of its Haar function, where the
power is the number of zero bits.

On a finite grid the pointwise product of the inputs equals the sum of the
paraproducts over every alpha with at least one zero bit plus the constant
``prod_j <f_j>`` coming from the global means; the residual helpers below
return the difference, which is identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import scalars
from .core import (
    DyadicInterval,
    StepFunction,
    average_table,
    coefficient_table,
    inner_product,
    pairing,
    pointwise_product,
)
from .errors import ResolutionError, ShapeError
from .scalars import RATIONAL


@dataclass(frozen=True)
class AlphaVector:
    """A vector of 0/1 slot markers: 0 = Haar pairing, 1 = average."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.bits, (list, str)):
            object.__setattr__(
                self, "bits", tuple(int(b) for b in self.bits)
            )
        if len(self.bits) < 1:
            raise ValueError("alpha needs at least one slot")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"alpha bits must be 0 or 1, got {self.bits}")

    @classmethod
    def from_string(cls, s: str) -> "AlphaVector":
        if not s or any(ch not in "01" for ch in s):
            raise ValueError(f"alpha string must be nonempty over 0/1, got {s!r}")
        return cls(tuple(int(ch) for ch in s))

    @property
    def m(self) -> int:
        return len(self.bits)

    @property
    def zero_count(self) -> int:
        return self.bits.count(0)

    @property
    def is_admissible(self) -> bool:
        """True when at least one slot is a Haar pairing (not all ones)."""
        return 0 in self.bits

    def __iter__(self):
        return iter(self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def _as_alpha(alpha) -> AlphaVector:
    if isinstance(alpha, AlphaVector):
        return alpha
    if isinstance(alpha, str):
        return AlphaVector.from_string(alpha)
    return AlphaVector(tuple(alpha))


def admissible_alphas(m: int) -> list[AlphaVector]:
    """All 0/1 vectors of length m except all-ones, in the recursion order:
    previous vectors with 1 appended, then with 0 appended, then the vector
    (1, ..., 1, 0)."""
    if m < 1:
        raise ValueError(f"arity must be >= 1, got {m}")
    if m == 1:
        return [AlphaVector((0,))]
    prev = admissible_alphas(m - 1)
    out = [AlphaVector(a.bits + (1,)) for a in prev]
    out += [AlphaVector(a.bits + (0,)) for a in prev]
    out.append(AlphaVector((1,) * (m - 1) + (0,)))
    return out


# The admissible vectors form the index set usually written U_m.
enumerate_Um = admissible_alphas


def haar_power(
    interval: DyadicInterval, sigma: int, depth: int, mode: str = RATIONAL
) -> StepFunction:
    """The sigma-th power of the Haar function of ``interval``.

    Power zero is the constant one on the whole universe; even powers are
    |I|**(-sigma/2) on I; odd powers keep the Haar sign pattern.
    """
    if not isinstance(sigma, int) or sigma < 0:
        raise ValueError(f"exponent must be an integer >= 0, got {sigma}")
    if interval.level >= depth:
        raise ResolutionError(
            f"no Haar function at level {interval.level} on a depth-{depth} grid"
        )
    if sigma == 0:
        return StepFunction.constant(1, depth, mode)
    z = scalars.zero(mode)
    w = scalars.root2_power(interval.level * sigma, mode)
    vals = [z] * (1 << depth)
    span = interval.leaf_span(depth)
    half = len(span) // 2
    flip = sigma % 2 == 1
    for i, leaf in enumerate(span):
        vals[leaf] = -w if (flip and i < half) else w
    return StepFunction._raw(depth, vals, mode)


def _check_tuple(fs: Sequence[StepFunction]) -> tuple[int, str]:
    if len(fs) < 1:
        raise ShapeError("need at least one input function")
    depth, mode = fs[0].depth, fs[0].mode
    for f in fs[1:]:
        if f.depth != depth:
            raise ShapeError(f"depth mismatch: {depth} vs {f.depth}")
        if f.mode != mode:
            raise ShapeError(f"mode mismatch: {mode} vs {f.mode}")
    return depth, mode


def _engine(
    bits: tuple[int, ...],
    tables: list,
    depth: int,
    mode: str,
    symbol_table: list | None = None,
) -> StepFunction:
    """Accumulate sum over intervals of (symbol *) slot products * h_I^sigma."""
    sigma = bits.count(0)
    n = 1 << depth
    z = scalars.zero(mode)
    out = [z] * n
    const_acc = z
    odd = sigma % 2 == 1
    for level in range(depth):
        w = scalars.root2_power(level * sigma, mode)
        width = 1 << (depth - level)
        half = width >> 1
        row0 = tables[0][level]
        for pos in range(1 << level):
            t = row0[pos]
            for tab in tables[1:]:
                t = t * tab[level][pos]
            if symbol_table is not None:
                t = t * symbol_table[level][pos]
            if not t:
                continue
            if sigma == 0:
                const_acc = const_acc + t
                continue
            tw = t * w
            start = pos * width
            if odd:
                for leaf in range(start, start + half):
                    out[leaf] = out[leaf] - tw
                for leaf in range(start + half, start + width):
                    out[leaf] = out[leaf] + tw
            else:
                for leaf in range(start, start + width):
                    out[leaf] = out[leaf] + tw
    if sigma == 0 and const_acc:
        out = [v + const_acc for v in out]
    return StepFunction._raw(depth, out, mode)


def _slot_tables(bits, fs):
    return [
        coefficient_table(f) if bit == 0 else average_table(f)
        for bit, f in zip(bits, fs)
    ]


def paraproduct(alpha, fs: Sequence[StepFunction]) -> StepFunction:
    """The paraproduct indexed by alpha applied to the tuple fs.

    Sum over every interval of the product of slot pairings times the
    sigma-th Haar power, sigma being the number of zero bits.  The all-ones
    alpha (sigma = 0) is accepted as plumbing; the operators the norm
    theory speaks about have sigma >= 1.
    """
    a = _as_alpha(alpha)
    if len(fs) != a.m:
        raise ShapeError(f"alpha has {a.m} slots but got {len(fs)} functions")
    depth, mode = _check_tuple(fs)
    return _engine(a.bits, _slot_tables(a.bits, fs), depth, mode)


def pi_paraproduct(alpha, b: StepFunction, fs: Sequence[StepFunction]) -> StepFunction:
    """Paraproduct with symbol b: b always enters through its Haar
    coefficients, i.e. this is the (0, alpha) paraproduct of (b, fs)."""
    a = _as_alpha(alpha)
    if len(fs) != a.m:
        raise ShapeError(f"alpha has {a.m} slots but got {len(fs)} functions")
    return paraproduct(AlphaVector((0,) + a.bits), [b, *fs])


# -- identities ---------------------------------------------------------------


def _mean(f: StepFunction):
    return pairing(f, DyadicInterval(0, 0), 1)


def product_decomposition_residual(fs: Sequence[StepFunction]) -> StepFunction:
    """prod(fs) minus the sum of all admissible paraproducts minus the
    global-mean constant; identically zero (exactly so in rational mode)."""
    m = len(fs)
    if m < 2:
        raise ShapeError(f"the decomposition needs at least 2 functions, got {m}")
    depth, mode = _check_tuple(fs)
    ctabs = [coefficient_table(f) for f in fs]
    atabs = [average_table(f) for f in fs]
    total = StepFunction.zeros(depth, mode)
    for a in admissible_alphas(m):
        tables = [
            ctabs[j] if bit == 0 else atabs[j] for j, bit in enumerate(a.bits)
        ]
        total = total + _engine(a.bits, tables, depth, mode)
    corr = scalars.one(mode)
    for at in atabs:
        corr = corr * at[0][0]
    return pointwise_product(fs) - total - StepFunction.constant(corr, depth, mode)


def localized_average_residual(
    interval: DyadicInterval, fs: Sequence[StepFunction]
) -> StepFunction:
    """Residual of the localized form of the decomposition on one interval.

    The product of the averages over J, viewed on J, equals the sum over
    the strict ancestors I of J of the paraproduct terms of I (restricted
    to J) plus the same global-mean constant.  Returns LHS - RHS, which is
    identically zero.
    """
    depth, mode = _check_tuple(fs)
    if interval.level < 1:
        raise ValueError("localization needs a proper subinterval of the universe")
    if interval.level > depth:
        raise ResolutionError(
            f"interval at level {interval.level} is finer than depth {depth}"
        )
    m = len(fs)
    ctabs = [coefficient_table(f) for f in fs]
    atabs = [average_table(f) for f in fs]

    lhs = scalars.one(mode)
    corr = scalars.one(mode)
    for at in atabs:
        lhs = lhs * at[interval.level][interval.position]
        corr = corr * at[0][0]

    ancestors = list(interval.ancestors())
    acc = scalars.zero(mode)
    for a in admissible_alphas(m):
        sigma = a.zero_count
        odd = sigma % 2 == 1
        for anc in ancestors:
            t = scalars.one(mode)
            for j, bit in enumerate(a.bits):
                tab = ctabs[j] if bit == 0 else atabs[j]
                t = t * tab[anc.level][anc.position]
            w = scalars.root2_power(anc.level * sigma, mode)
            # J sits inside one half of each strict ancestor
            child_bit = (interval.position >> (interval.level - anc.level - 1)) & 1
            if odd and child_bit == 0:
                acc = acc - t * w
            else:
                acc = acc + t * w

    z = scalars.zero(mode)
    residual = [z] * (1 << depth)
    value = lhs - acc - corr
    for leaf in interval.leaf_span(depth):
        residual[leaf] = value
    return StepFunction._raw(depth, residual, mode)


def multiplication_decomposition_residual(
    b: StepFunction, f: StepFunction
) -> StepFunction:
    """b*f minus its three-paraproduct expansion minus <b><f>; zero."""
    return product_decomposition_residual([b, f])


def adjoint_residual(f1: StepFunction, f2: StepFunction, g: StepFunction):
    """<pi_{f1}(f2), g> - <f2, P^{(0,0)}(f1, g)>; exactly zero.

    The adjoint of the symbol paraproduct in its function argument is the
    (0,0) paraproduct against the symbol; no mean correction appears.
    """
    lhs = inner_product(paraproduct(AlphaVector((0, 1)), [f1, f2]), g)
    rhs = inner_product(f2, paraproduct(AlphaVector((0, 0)), [f1, g]))
    return lhs - rhs


def transpose_residual(
    alpha, b: StepFunction, g: StepFunction, fs: Sequence[StepFunction]
):
    """Duality between the single-Haar-slot symbol paraproduct and the
    all-average one: <pi_b^{(0,1,...,1)}(fs), g> = <pi_b^{(1,...,1)}(g,
    f_2, ..., f_m), f_1>.  Returns the difference, exactly zero.
    """
    a = _as_alpha(alpha)
    if a.bits[0] != 0 or a.zero_count != 1:
        raise ValueError(
            f"transpose identity needs alpha = (0, 1, ..., 1), got {a}"
        )
    if len(fs) != a.m:
        raise ShapeError(f"alpha has {a.m} slots but got {len(fs)} functions")
    lhs = inner_product(pi_paraproduct(a, b, fs), g)
    all_ones = AlphaVector((1,) * a.m)
    rhs = inner_product(pi_paraproduct(all_ones, b, [g, *fs[1:]]), fs[0])
    return lhs - rhs
