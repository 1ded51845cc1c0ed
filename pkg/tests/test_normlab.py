import json
import math
from fractions import Fraction

import pytest

from dyadicops import (
    UNIVERSE,
    DyadicInterval,
    ExperimentReport,
    ExponentTuple,
    OperatorDescriptor,
    SamplerSpec,
    StepFunction,
    SymbolSequence,
    commutator_necessity_family,
    estimate_operator_norm,
    extremal_multiplier_family,
    extremal_pi_family,
    extremal_tuple,
    interval_family,
    lp_norm,
    necessity_case,
    pairing,
    weak_type_ratio,
)
from dyadicops.errors import ShapeError
from dyadicops.normlab import _lr_quasinorm
from dyadicops.scalars import FLOAT64


class TestExponentTuple:
    def test_construction(self):
        e = ExponentTuple((2, 2))
        assert e.m == 2
        assert e.r == Fraction(1)
        assert ExponentTuple.from_string("2,3").p == (Fraction(2), Fraction(3))
        assert ExponentTuple((Fraction(3, 2),)).r == Fraction(3, 2)

    def test_holder_exponent(self):
        assert ExponentTuple((1, 1)).r == Fraction(1, 2)
        assert ExponentTuple((1, 2)).r == Fraction(2, 3)
        assert ExponentTuple((4, 4, 4)).r == Fraction(4, 3)

    def test_validation(self):
        with pytest.raises(ValueError):
            ExponentTuple((Fraction(1, 2), 2))
        with pytest.raises(ValueError):
            ExponentTuple(())

    def test_q_chain(self):
        # 1/q_k = (k-1) + sum_{j>k} 1/p_j
        e = ExponentTuple((1, 2))
        assert e.q_chain() == [Fraction(2), Fraction(1)]
        one = ExponentTuple((2,))
        assert one.q_chain() == [None]  # 1/q_1 = 0
        pair = ExponentTuple((1, 1))
        assert pair.q_chain() == [Fraction(1), Fraction(1)]

    def test_weak_target_matches_r_for_leading_ones(self):
        # with p_1 = ... = p_k = 1 the weak endpoint q_k/(q_k+1) equals r
        e = ExponentTuple((1, 1, 2))
        q = e.q_chain()
        for k in (1, 2):
            target = e.weak_target(k)
            assert target == q[k - 1] / (q[k - 1] + 1)
        assert e.weak_target(2) == e.r

    def test_json(self):
        e = ExponentTuple((1, Fraction(3, 2)))
        assert e.to_json_dict() == {"p": ["1", "3/2"], "r": "3/5"}


class TestOperatorDescriptor:
    def test_paraproduct_rejects_extras(self):
        with pytest.raises(ValueError):
            OperatorDescriptor("paraproduct", (0, 1), b=StepFunction.zeros(2))
        OperatorDescriptor("paraproduct", (0, 1))

    def test_pi_needs_b(self):
        with pytest.raises(ValueError):
            OperatorDescriptor("pi_paraproduct", (0, 1))

    def test_multiplier_needs_symbol_and_admissible_alpha(self):
        with pytest.raises(ValueError):
            OperatorDescriptor("multilinear_multiplier", (0, 1))
        with pytest.raises(ValueError):
            OperatorDescriptor(
                "multilinear_multiplier", (1, 1), symbol=SymbolSequence.constant(1)
            )

    def test_commutator_needs_everything(self):
        b = StepFunction.from_values([1, 0])
        eps = SymbolSequence.constant(1)
        with pytest.raises(ValueError):
            OperatorDescriptor("commutator", (0, 1), b=b, symbol=eps)
        with pytest.raises(ValueError):
            OperatorDescriptor("commutator", (0, 1), b=b, symbol=eps, slot=3)
        d = OperatorDescriptor("commutator", (0, 1), b=b, symbol=eps, slot=1)
        assert d.arity == 2

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            OperatorDescriptor("fourier", (0, 1))

    def test_apply_dispatch(self):
        f = StepFunction.from_values([1.0, 2.0], mode=FLOAT64)
        g = StepFunction.from_values([1.0, 3.0], mode=FLOAT64)
        d = OperatorDescriptor("paraproduct", (0, 1))
        assert d.apply([f, g]).values == pytest.approx((-1.0, 1.0))

    def test_json_round_trip(self):
        b = StepFunction.from_values([1, 0])
        eps = SymbolSequence.constant(Fraction(1, 2))
        d = OperatorDescriptor("commutator", (0, 1), b=b, symbol=eps, slot=2)
        blob = json.dumps(d.to_json_dict(), indent=2, sort_keys=True)
        back = OperatorDescriptor.from_json_dict(json.loads(blob))
        assert back.kind == d.kind and back.alpha == d.alpha and back.slot == 2
        assert back.symbol == d.symbol and back.b == d.b


class TestSampler:
    def test_family_validation(self):
        with pytest.raises(ValueError):
            SamplerSpec("gaussian", 3)
        with pytest.raises(ValueError):
            SamplerSpec("random-step", 0)
        with pytest.raises(ValueError):
            SamplerSpec("rademacher-haar", 3, level_cap=3)

    def test_trial_determinism(self):
        spec = SamplerSpec("random-step", 3, seed=42)
        d = OperatorDescriptor("paraproduct", (0, 1))
        e = ExponentTuple((2, 2))
        a = spec.draw_tuple(7, d, e)
        b = spec.draw_tuple(7, d, e)
        assert a == b
        c = spec.draw_tuple(8, d, e)
        assert a != c

    def test_random_step_shape(self):
        spec = SamplerSpec("random-step", 2, seed=0)
        d = OperatorDescriptor("paraproduct", (0, 1, 1))
        fs = spec.draw_tuple(0, d, ExponentTuple((2, 2, 2)))
        assert len(fs) == 3
        assert all(f.depth == 2 and f.mode == FLOAT64 for f in fs)
        assert all(-1.0 <= v <= 1.0 for f in fs for v in f.values)

    def test_rademacher_haar_mean_zero_and_cap(self):
        spec = SamplerSpec("rademacher-haar", 4, seed=3, level_cap=1)
        d = OperatorDescriptor("paraproduct", (0, 1))
        fs = spec.draw_tuple(0, d, ExponentTuple((2, 2)))
        for f in fs:
            assert sum(f.values) == pytest.approx(0.0)
            # constant on quarters: no contribution below level 1
            for k in range(0, 16, 4):
                assert len({f.values[k + j] for j in range(4)}) == 1

    def test_indicator_family_is_normalized(self):
        spec = SamplerSpec("indicator", 4, seed=5)
        e = ExponentTuple((1, 3))
        d = OperatorDescriptor("paraproduct", (0, 1))
        for trial in range(10):
            fs = spec.draw_tuple(trial, d, e)
            for f, p in zip(fs, e.p):
                assert lp_norm(f, p) == pytest.approx(1.0)


class TestExtremalFamilies:
    def test_multiplier_family_layout(self):
        i = DyadicInterval(2, 1)
        fs = extremal_multiplier_family(i, (0, 1, 0), 4)
        assert fs[0] == StepFunction.haar(i, 4, FLOAT64)
        assert fs[1] == StepFunction.indicator(i, 4, FLOAT64)
        assert fs[2] == fs[0]

    def test_pi_family_normalized(self):
        e = ExponentTuple((2, 3, Fraction(3, 2)))
        for i in [UNIVERSE, DyadicInterval(1, 1), DyadicInterval(3, 5)]:
            fs = extremal_pi_family(i, (0, 0, 1), e, 4)
            for f, p in zip(fs, e.p):
                assert lp_norm(f, p) == pytest.approx(1.0)

    def test_necessity_case_dispatch(self):
        assert necessity_case((0, 1), 1) == "I"
        assert necessity_case((0, 1), 2) == "II"
        assert necessity_case((0, 0), 1) == "II"
        assert necessity_case((1, 0), 2) == "I"

    def test_case_mismatch_rejected(self):
        with pytest.raises(ValueError):
            commutator_necessity_family("II", DyadicInterval(1, 0), (0, 1), 1, 3)
        with pytest.raises(ValueError):
            commutator_necessity_family("I", DyadicInterval(1, 0), (0, 0), 1, 3)

    def test_case_one_layout(self):
        i = DyadicInterval(2, 2)
        fs = commutator_necessity_family("I", i, (1, 0), 2, 4)
        assert fs[0] == StepFunction.haar(i.parent(), 4, FLOAT64)
        assert fs[1] == StepFunction.indicator(i, 4, FLOAT64)

    def test_case_one_needs_parent(self):
        assert extremal_tuple(
            OperatorDescriptor(
                "commutator",
                (0, 1),
                b=StepFunction.from_values([1.0, 0.0], mode=FLOAT64),
                symbol=SymbolSequence.constant(1),
                slot=1,
            ),
            ExponentTuple((2, 2)),
            UNIVERSE,
            3,
        ) is None


class TestExperiments:
    def make_multiplier(self, value=5):
        eps = SymbolSequence(
            default=1, entries={DyadicInterval(1, 0): Fraction(value)}
        )
        return OperatorDescriptor("multilinear_multiplier", (0, 1), symbol=eps)

    def test_extremal_bound_and_best(self):
        d = self.make_multiplier()
        report = estimate_operator_norm(
            d, ExponentTuple((2, 2)), SamplerSpec("random-step", 3, seed=1), trials=20
        )
        assert report.extremal_lower_bound == pytest.approx(5.0)
        assert report.best_ratio >= report.extremal_lower_bound
        assert report.trials == 20
        # extremal jobs land after the random trials
        assert report.best_trial >= 20

    def test_reports_byte_identical(self):
        d = self.make_multiplier()
        e = ExponentTuple((2, 2))
        s = SamplerSpec("rademacher-haar", 3, seed=9)
        a = estimate_operator_norm(d, e, s, trials=30)
        b = estimate_operator_norm(d, e, s, trials=30)
        assert a.to_json() == b.to_json()

    def test_parallel_matches_sequential(self):
        d = self.make_multiplier()
        e = ExponentTuple((2, 2))
        s = SamplerSpec("random-step", 3, seed=2)
        seq = estimate_operator_norm(d, e, s, trials=25)
        par = estimate_operator_norm(d, e, s, trials=25, workers=4)
        assert seq.to_json() == par.to_json()

    def test_report_fields(self):
        b = StepFunction.from_values([1, 0, 0, 0])
        d = OperatorDescriptor("pi_paraproduct", (1,), b=b)
        report = estimate_operator_norm(
            d, ExponentTuple((2,)), SamplerSpec("random-step", 2, seed=0), trials=5
        )
        obj = report.to_json_dict()
        assert obj["grid"] == {"depth": 2}
        assert set(obj["b_norms"]) == {"bmo1", "bmo2", "bstar"}
        assert obj["mode"] == "float64"
        assert "artifact_version" in obj

    def test_trials_csv(self):
        d = self.make_multiplier()
        report = estimate_operator_norm(
            d, ExponentTuple((2, 2)), SamplerSpec("random-step", 2, seed=3), trials=4
        )
        lines = report.trials_csv().strip().splitlines()
        assert lines[0] == "trial,ratio"
        assert len(lines) >= 5

    def test_arity_mismatch(self):
        d = self.make_multiplier()
        with pytest.raises(ShapeError):
            estimate_operator_norm(
                d, ExponentTuple((2,)), SamplerSpec("random-step", 3), trials=2
            )

    def test_b_depth_mismatch(self):
        b = StepFunction.from_values([1, 0])
        d = OperatorDescriptor("pi_paraproduct", (1, 1), b=b)
        with pytest.raises(ShapeError):
            estimate_operator_norm(
                d, ExponentTuple((2, 2)), SamplerSpec("random-step", 3), trials=2
            )

    def test_weak_needs_an_endpoint(self):
        d = self.make_multiplier()
        with pytest.raises(ValueError):
            weak_type_ratio(
                d, ExponentTuple((2, 2)), SamplerSpec("random-step", 3), trials=2
            )
        report = weak_type_ratio(
            d, ExponentTuple((1, 2)), SamplerSpec("random-step", 3, seed=4), trials=5
        )
        assert report.weak_type is True
        assert report.best_ratio > 0

    def test_zero_input_trials_skipped(self):
        # indicator slots at level 0 for a commutator Case I family do not
        # exist; those extremal jobs must be skipped, not crash
        b = StepFunction.from_values([1.0, 0.0, 0.0, 0.0], mode=FLOAT64)
        d = OperatorDescriptor(
            "commutator",
            (0, 1),
            b=b,
            symbol=SymbolSequence.constant(1),
            slot=1,
        )
        report = estimate_operator_norm(
            d, ExponentTuple((2, 2)), SamplerSpec("random-step", 2, seed=0), trials=3
        )
        ratios = dict(report.trial_ratios)
        assert ratios[3] is None  # universe-level extremal job skipped
        assert report.best_ratio > 0


class TestClosedFormRatios:
    def test_multiplier_ratio_is_symbol_value(self):
        depth = 4
        eps = SymbolSequence(
            default=Fraction(1, 3),
            entries={DyadicInterval(2, 1): Fraction(-7, 2)},
        )
        d = OperatorDescriptor("multilinear_multiplier", (0, 1), symbol=eps)
        e = ExponentTuple((2, 2))
        for i in [UNIVERSE, DyadicInterval(2, 1), DyadicInterval(3, 4)]:
            fs = extremal_tuple(d.as_float64(), e, i, depth)
            out = d.as_float64().apply(fs)
            ratio = _lr_quasinorm(out, e.r)
            for f, p in zip(fs, e.p):
                ratio /= lp_norm(f, p)
            assert ratio == pytest.approx(abs(float(eps.value(i))), abs=1e-9)

    def test_pi_ratio_is_haar_coefficient(self):
        depth = 4
        b = StepFunction.from_values(
            [0.5, -1.0, 2.0, 0.25, 0.0, 1.0, -0.5, 0.75,
             1.5, -2.0, 0.0, 0.5, 1.0, -1.0, 0.25, 2.0], mode=FLOAT64
        )
        d = OperatorDescriptor("pi_paraproduct", (0, 1), b=b)
        e = ExponentTuple((2, 2))
        for i in interval_family(depth):
            fs = extremal_pi_family(i, (0, 1), e, depth)
            out = d.apply(fs)
            ratio = _lr_quasinorm(out, e.r)
            expect = abs(float(pairing(b, i, 0))) * math.sqrt(float(1 << i.level))
            assert ratio == pytest.approx(expect, abs=1e-9)
