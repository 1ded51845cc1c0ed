"""Command line front end.

One binary with subcommands; anything a subcommand produces can be written
to a file for archival reproduction.  Exit codes: 0 success, 1 a
verification suite found failures, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

from .core import (
    HaarSpectrum,
    StepFunction,
    analyze,
    lp_norm,
    pairing,
    synthesize,
    weak_lp_quasinorm,
)
from .errors import DyadicOpsError
from .multipliers import (
    SymbolSequence,
    commutator,
    linear_multiplier,
    multilinear_multiplier,
)
from .normlab import (
    ExponentTuple,
    OperatorDescriptor,
    SamplerSpec,
    estimate_operator_norm,
    random_rational_step,
    weak_type_ratio,
)
from .paraproducts import (
    AlphaVector,
    admissible_alphas,
    adjoint_residual,
    localized_average_residual,
    product_decomposition_residual,
    transpose_residual,
)
from .scalars import FLOAT64, RATIONAL
from .sublinear import (
    bmo2_via_haar,
    bmo_norm,
    bstar_seminorm,
    cz_decompose,
    maximal,
    square_function,
)
from .core import DyadicInterval, interval_family

FLOAT_TOL = 1e-9

OP_ALIASES = {
    "para": "paraproduct",
    "paraproduct": "paraproduct",
    "pi": "pi_paraproduct",
    "pi_paraproduct": "pi_paraproduct",
    "mult": "multilinear_multiplier",
    "multiplier": "multilinear_multiplier",
    "multilinear_multiplier": "multilinear_multiplier",
    "commutator": "commutator",
}

SUITES = (
    "decomposition",
    "localized",
    "adjoint",
    "transpose",
    "multiplier-coeff",
    "commutator-constant",
)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj, output: str | None):
    text = _dumps(obj)
    if output:
        Path(output).write_text(text)
    sys.stdout.write(text)


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _scalar_is_small(value, mode: str) -> bool:
    if mode == RATIONAL:
        return not value
    return abs(value) <= FLOAT_TOL


def _function_is_small(f: StepFunction) -> bool:
    return all(_scalar_is_small(v, f.mode) for v in f.values)


def _random_function(rng: random.Random, depth: int, mode: str) -> StepFunction:
    f = random_rational_step(rng, depth)
    return f if mode == RATIONAL else f.as_float64()


# -- verify suites -----------------------------------------------------------


def _suite_decomposition(args, rng) -> int:
    if args.m < 2:
        raise ValueError("the decomposition suite needs --m >= 2")
    if args.depth < 2:
        raise ValueError("the decomposition suite needs --depth >= 2")
    failures = 0
    for _ in range(args.trials):
        fs = [_random_function(rng, args.depth, args.mode) for _ in range(args.m)]
        if not _function_is_small(product_decomposition_residual(fs)):
            failures += 1
    return failures


def _suite_localized(args, rng) -> int:
    if args.m < 2:
        raise ValueError("the localized suite needs --m >= 2")
    if args.depth < 2:
        raise ValueError("the localized suite needs --depth >= 2")
    failures = 0
    for _ in range(args.trials):
        fs = [_random_function(rng, args.depth, args.mode) for _ in range(args.m)]
        for level in range(1, args.depth + 1):
            interval = DyadicInterval(level, rng.randrange(1 << level))
            if not _function_is_small(localized_average_residual(interval, fs)):
                failures += 1
    return failures


def _suite_adjoint(args, rng) -> int:
    failures = 0
    for _ in range(args.trials):
        f1, f2, g = (
            _random_function(rng, args.depth, args.mode) for _ in range(3)
        )
        if not _scalar_is_small(adjoint_residual(f1, f2, g), args.mode):
            failures += 1
    return failures


def _suite_transpose(args, rng) -> int:
    alpha = AlphaVector((0,) + (1,) * (args.m - 1))
    failures = 0
    for _ in range(args.trials):
        b = _random_function(rng, args.depth, args.mode)
        g = _random_function(rng, args.depth, args.mode)
        fs = [_random_function(rng, args.depth, args.mode) for _ in range(args.m)]
        if not _scalar_is_small(transpose_residual(alpha, b, g, fs), args.mode):
            failures += 1
    return failures


def _random_symbol(rng, depth: int) -> SymbolSequence:
    entries = {
        i: Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        for i in interval_family(depth)
    }
    return SymbolSequence(default=0, entries=entries)


def _suite_multiplier_coeff(args, rng) -> int:
    failures = 0
    for _ in range(args.trials):
        eps = _random_symbol(rng, args.depth)
        f = _random_function(rng, args.depth, args.mode)
        out = linear_multiplier(eps, f)
        table = eps.table(args.depth, args.mode)
        for interval in interval_family(args.depth):
            want = table[interval.level][interval.position] * pairing(f, interval, 0)
            got = pairing(out, interval, 0)
            if not _scalar_is_small(got - want, args.mode):
                failures += 1
    return failures


def _suite_commutator_constant(args, rng) -> int:
    failures = 0
    alphas = admissible_alphas(args.m)
    for _ in range(args.trials):
        c = Fraction(rng.randint(-12, 12), rng.randint(1, 6))
        b = StepFunction.constant(
            c if args.mode == RATIONAL else float(c), args.depth, args.mode
        )
        eps = _random_symbol(rng, args.depth)
        alpha = rng.choice(alphas)
        slot = rng.randint(1, alpha.m)
        fs = [_random_function(rng, args.depth, args.mode) for _ in range(alpha.m)]
        if not _function_is_small(commutator(slot, b, eps, alpha, fs)):
            failures += 1
    return failures


_SUITE_RUNNERS = {
    "decomposition": _suite_decomposition,
    "localized": _suite_localized,
    "adjoint": _suite_adjoint,
    "transpose": _suite_transpose,
    "multiplier-coeff": _suite_multiplier_coeff,
    "commutator-constant": _suite_commutator_constant,
}


def cmd_verify(args) -> int:
    rng = random.Random(f"verify:{args.suite}:{args.seed}")
    failures = _SUITE_RUNNERS[args.suite](args, rng)
    _emit(
        {
            "suite": args.suite,
            "m": args.m,
            "depth": args.depth,
            "trials": args.trials,
            "seed": args.seed,
            "mode": args.mode,
            "failures": failures,
            "ok": failures == 0,
        },
        args.output,
    )
    return 0 if failures == 0 else 1


# -- data commands -------------------------------------------------------------


def cmd_transform(args) -> int:
    obj = _load_json(args.input)
    if args.direction == "analyze":
        out = analyze(StepFunction.from_json_dict(obj)).to_json_dict()
    else:
        out = synthesize(HaarSpectrum.from_json_dict(obj)).to_json_dict()
    _emit(out, args.output)
    return 0


def _parse_p(text: str):
    p = text.strip()
    if p in ("inf", "oo", "infinity"):
        return math.inf
    return Fraction(p)


def cmd_norms(args) -> int:
    f = StepFunction.from_json_dict(_load_json(args.input))
    ps = [_parse_p(part) for part in args.p.split(",")]
    out = {
        "depth": f.depth,
        "mode": f.mode,
        "lp": {},
        "weak_lp": {},
        "bmo1": float(bmo_norm(f, 1)),
        "bmo2": float(bmo_norm(f, 2)),
        "bmo2_haar": float(bmo2_via_haar(f)),
        "bstar": float(bstar_seminorm(f)),
    }
    for p in ps:
        key = "inf" if p == math.inf else str(p)
        out["lp"][key] = float(lp_norm(f, p))
        if p != math.inf:
            out["weak_lp"][key] = float(weak_lp_quasinorm(f, p))
    if args.include_maximal:
        out["maximal"] = maximal(f).to_json_dict()
    if args.include_square:
        out["square"] = square_function(f).to_json_dict()
    _emit(out, args.output)
    return 0


def cmd_czd(args) -> int:
    f = StepFunction.from_json_dict(_load_json(args.input))
    height = Fraction(args.height) if f.mode == RATIONAL else float(Fraction(args.height))
    _emit(cz_decompose(f, height).to_json_dict(), args.output)
    return 0


# -- experiments -----------------------------------------------------------------


def _build_descriptor(args) -> OperatorDescriptor:
    kind = OP_ALIASES.get(args.op)
    if kind is None:
        raise ValueError(
            f"unknown operator {args.op!r}; choose from {sorted(set(OP_ALIASES))}"
        )
    alpha = AlphaVector.from_string(args.alpha)
    b = None
    if args.b is not None:
        b = StepFunction.from_json_dict(_load_json(args.b))
    symbol = None
    if args.symbol is not None:
        symbol = SymbolSequence.from_json_dict(_load_json(args.symbol))
    elif args.symbol_const is not None:
        symbol = SymbolSequence.constant(Fraction(args.symbol_const))
    elif kind in ("multilinear_multiplier", "commutator"):
        symbol = SymbolSequence.constant(1)
    slot = args.slot if kind == "commutator" else None
    if kind == "commutator" and slot is None:
        raise ValueError("commutator experiments need --slot")
    if kind in ("paraproduct",):
        b = None
        symbol = None
    return OperatorDescriptor(kind=kind, alpha=alpha, b=b, symbol=symbol, slot=slot)


def _run_experiment_cmd(args, weak: bool) -> int:
    descriptor = _build_descriptor(args)
    exponents = ExponentTuple.from_string(args.p)
    depth = args.depth
    if depth is None:
        if descriptor.b is not None:
            depth = descriptor.b.depth
        else:
            raise ValueError("--depth is required when no --b file sets the grid")
    sampler = SamplerSpec(
        family=args.family, depth=depth, seed=args.seed, level_cap=args.level_cap
    )
    runner = weak_type_ratio if weak else estimate_operator_norm
    report = runner(descriptor, exponents, sampler, args.trials, workers=args.workers)
    text = report.to_json()
    Path(args.output).write_text(text)
    sys.stdout.write(text)
    if args.dump_trials:
        Path(args.dump_trials).write_text(report.trials_csv())
    return 0


def cmd_estimate(args) -> int:
    return _run_experiment_cmd(args, weak=False)


def cmd_weak(args) -> int:
    return _run_experiment_cmd(args, weak=True)


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadicops",
        description="Multilinear dyadic operators on finite grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an exact identity suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--m", type=int, default=2, help="arity for tuple suites")
    v.add_argument("--depth", type=int, default=4)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=(RATIONAL, FLOAT64), default=RATIONAL)
    v.add_argument("-o", "--output", default=None)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("transform", help="Haar analysis / synthesis of a file")
    t.add_argument("direction", choices=("analyze", "synthesize"))
    t.add_argument("input")
    t.add_argument("-o", "--output", default=None)
    t.set_defaults(func=cmd_transform)

    n = sub.add_parser("norms", help="norms and functionals of a function file")
    n.add_argument("input")
    n.add_argument("--p", default="1,2", help="comma list of exponents (inf ok)")
    n.add_argument("--include-maximal", action="store_true")
    n.add_argument("--include-square", action="store_true")
    n.add_argument("-o", "--output", default=None)
    n.set_defaults(func=cmd_norms)

    c = sub.add_parser("czd", help="stopping-time decomposition at a height")
    c.add_argument("input")
    c.add_argument("--height", required=True)
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(func=cmd_czd)

    for name, weak in (("estimate", False), ("weak", True)):
        e = sub.add_parser(
            name,
            help=(
                "weak-type ratio search" if weak else "operator norm lower bound"
            ),
        )
        e.add_argument("--op", required=True)
        e.add_argument("--alpha", required=True)
        e.add_argument("--slot", type=int, default=None)
        e.add_argument("--b", default=None, help="StepFunction JSON file")
        e.add_argument("--symbol", default=None, help="SymbolSequence JSON file")
        e.add_argument("--symbol-const", default=None)
        e.add_argument("--p", required=True, help="comma list of exponents")
        e.add_argument("--depth", type=int, default=None)
        e.add_argument("--trials", type=int, default=200)
        e.add_argument("--seed", type=int, default=0)
        e.add_argument("--family", default="random-step")
        e.add_argument("--level-cap", type=int, default=None)
        e.add_argument("--workers", type=int, default=None)
        e.add_argument("--dump-trials", default=None)
        e.add_argument("-o", "--output", default="report.json")
        e.set_defaults(func=cmd_weak if weak else cmd_estimate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (DyadicOpsError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())
