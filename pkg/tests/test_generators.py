"""Tests for core/generators.py: seeded instances, sweeps and hunts."""

from dataclasses import replace

import numpy as np
import pytest

from core.checks import THEOREMS, TheoremKind, Verdict, theorem_ids
from core.errors import ParameterOutOfRangeError, UnknownIdError
from core.funcspace import check_weight_flags
from core.generators import (
    CURATED,
    DrawOptions,
    InstanceSpec,
    Perturbation,
    default_interval,
    draw_hermitian,
    draw_instance,
    hunt,
    random_admissible_weight,
    random_pair,
    ramp_weight,
    resolve_function,
    resolve_weight,
    run_instance,
    run_trials,
    sweep,
    valley_weight,
)
from core.linalg import Interval, eigenvalues
from core.quadrature import DEFAULT_RULE


class TestRandomMatrices:
    def test_prescribed_spectrum(self):
        m, lam = draw_hermitian(4, 5, Interval(-1.0, 2.0))
        assert np.all((lam >= -1.0) & (lam <= 2.0))
        assert np.max(np.abs(eigenvalues(m) - np.sort(lam)[::-1])) < 1e-10

    def test_reproducible(self):
        a1, b1 = random_pair(10, 3, Interval(0.0, 1.0))
        a2, b2 = random_pair(10, 3, Interval(0.0, 1.0))
        assert a1.max_entry_diff(a2) == 0.0
        assert b1.max_entry_diff(b2) == 0.0
        assert a1.max_entry_diff(b1) > 0.0

    def test_complex_entries(self):
        m, _ = draw_hermitian(2, 3, Interval(0.0, 1.0))
        assert np.any(np.abs(m.entries.imag) > 0)

    def test_invalid_size(self):
        with pytest.raises(ParameterOutOfRangeError):
            draw_hermitian(0, 0, Interval(0.0, 1.0))


class TestRandomWeights:
    def test_admissible(self):
        for seed in range(20):
            p = random_admissible_weight(seed, 1 + seed % 4)
            report = check_weight_flags(p)
            assert report.symmetric and report.nondecreasing_first_half and report.nonnegative

    def test_valley_breaks_monotonicity(self):
        report = check_weight_flags(valley_weight(3, 2))
        assert report.symmetric
        assert not report.nondecreasing_first_half

    def test_ramp_breaks_symmetry(self):
        report = check_weight_flags(ramp_weight(3, 2))
        assert not report.symmetric
        assert report.nondecreasing_first_half

    def test_resolve_family_ids(self):
        p = resolve_weight("random:12:3")
        assert p.id == "random:12:3"
        assert p(0.3) == random_admissible_weight(12, 3)(0.3)
        assert resolve_weight("tent").id == "tent"

    def test_malformed_family_id(self):
        with pytest.raises(UnknownIdError):
            resolve_weight("random:x")
        with pytest.raises(UnknownIdError):
            resolve_weight("random:1:0")


class TestInstanceSpec:
    def test_dict_round_trip(self):
        spec = InstanceSpec("mond-pecaric-reverse", 5, "square", weight_id="tent", n=3,
                            interval=Interval(0.0, 1.0), alpha=0.5, m=0.0, big_m=1.0,
                            perturbation=Perturbation.DROP_CONVEXITY)
        d = spec.to_dict()
        assert d["M"] == 1.0
        assert d["perturbation"] == "drop-convexity"
        assert InstanceSpec.from_dict(d) == spec

    def test_waived_flags(self):
        spec = InstanceSpec("scalar-levin-steckin", 1, "square",
                            perturbation="drop-monotone-weight")
        assert spec.waived == frozenset({"nondecreasing"})

    def test_invalid_n(self):
        with pytest.raises(ParameterOutOfRangeError):
            InstanceSpec("matrix-fejer-lower", 1, "square", n=0)

    def test_default_interval(self):
        assert default_interval(resolve_function("reciprocal")) == Interval(0.5, 2.0)
        assert default_interval(resolve_function("square")) == Interval(0.0, 1.0)
        assert default_interval(resolve_function("exp")) == Interval(-1.0, 1.0)


class TestDrawInstance:
    def test_every_theorem_draws(self):
        for tid in theorem_ids():
            spec = draw_instance(tid, 123)
            assert spec.theorem_id == tid
            resolve_function(spec.function_id)
            if THEOREMS[tid].kind is TheoremKind.MATRIX:
                assert 1 <= spec.n <= 5
            if spec.weight_id:
                resolve_weight(spec.weight_id)

    def test_deterministic(self):
        assert draw_instance("log-fejer", 99) == draw_instance("log-fejer", 99)

    def test_unknown_theorem(self):
        with pytest.raises(UnknownIdError):
            draw_instance("nope", 1)

    def test_function_filter(self):
        opts = DrawOptions(function_ids=("exp",), weight_ids=("tent",))
        spec = draw_instance("matrix-fejer-lower", 4, opts)
        assert spec.function_id == "exp"
        assert spec.weight_id == "tent"

    def test_drop_convexity_draws_non_convex(self):
        spec = draw_instance("scalar-fejer", 8, perturbation=Perturbation.DROP_CONVEXITY)
        assert not resolve_function(spec.function_id).flags.convex

    def test_drop_monotone_draws_non_monotone_weight(self):
        spec = draw_instance("scalar-levin-steckin", 8,
                             perturbation=Perturbation.DROP_MONOTONE_WEIGHT)
        assert not resolve_weight(spec.weight_id).flags.nondecreasing_first_half


class TestRunInstance:
    def test_seeded_matrices(self):
        spec = InstanceSpec("matrix-fejer-lower", 3, "exp", weight_id="tent", n=3)
        first = run_instance(spec)
        second = run_instance(spec)
        assert first.verdict is Verdict.PASS
        assert first.margin == second.margin
        assert first.instance["seed"] == 3

    def test_bad_id_becomes_error(self):
        spec = InstanceSpec("scalar-levin-steckin", 1, "cube", weight_id="one")
        result = run_instance(spec)
        assert result.verdict is Verdict.ERROR
        assert "UnknownIdError" in result.error

    def test_curated_controls_violate(self):
        """Each curated negative control is a real violation once its flags are waived."""
        for (tid, pert), fields in CURATED.items():
            spec = replace(draw_instance(tid, 1, perturbation=pert), **fields)
            assert run_instance(spec).verdict is Verdict.VIOLATED, (tid, pert)


class TestSweep:
    def test_order_and_determinism(self):
        ids = ["scalar-fejer", "general-levin-steckin"]
        first = sweep(ids, 3, seed=7)
        second = sweep(ids, 3, seed=7, threads=2)
        assert [t.spec for t in first] == [t.spec for t in second]
        assert [t.result.margin for t in first] == [t.result.margin for t in second]
        assert [t.spec.theorem_id for t in first] == ["scalar-fejer"] * 3 + ["general-levin-steckin"] * 3

    def test_scalar_theorems_pass(self):
        scalar = [tid for tid in theorem_ids() if THEOREMS[tid].kind is not TheoremKind.MATRIX]
        for trial in sweep(scalar, 20, seed=7):
            assert trial.result.verdict is Verdict.PASS, (trial.spec, trial.result.error)

    def test_matrix_theorems_pass(self):
        matrix = [tid for tid in theorem_ids() if THEOREMS[tid].kind is TheoremKind.MATRIX]
        for trial in sweep(matrix, 4, seed=7, opts=DrawOptions(n_max=3)):
            assert trial.result.verdict is Verdict.PASS, (trial.spec, trial.result.error)

    def test_margins_stable_under_refinement(self):
        """Pass margins agree to 1e-8 when the panel count doubles."""
        runs = [
            (theorem_ids(), DrawOptions(n_max=3)),
            (["matrix-fejer-lower", "mond-pecaric-reverse"],
             DrawOptions(n_max=4, function_ids=("abs_shift",))),
        ]
        for ids, opts in runs:
            coarse = sweep(ids, 6, seed=7, opts=opts)
            fine = sweep(ids, 6, seed=7, opts=opts, rule=DEFAULT_RULE.refined())
            for c, f in zip(coarse, fine):
                if c.result.verdict is Verdict.PASS:
                    assert abs(c.result.margin - f.result.margin) <= 1e-8, c.spec

    def test_square_never_log_convex(self):
        for trial in sweep(["log-fejer"], 5, seed=1, opts=DrawOptions(function_ids=("square",))):
            assert trial.result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_needs_trials(self):
        with pytest.raises(ParameterOutOfRangeError):
            sweep(["scalar-fejer"], 0, seed=1)

    def test_run_trials_empty(self):
        assert run_trials([]) == []


class TestHunt:
    def test_drop_monotone_weight_finds_violations(self):
        outcome = hunt("scalar-levin-steckin", 20, seed=1,
                       perturbation=Perturbation.DROP_MONOTONE_WEIGHT)
        assert outcome.findings
        assert outcome.trials[0].spec.weight_id == "vee"

    def test_unperturbed_matrix_fejer_lower_finds_nothing(self):
        outcome = hunt("matrix-fejer-lower", 10, seed=1, opts=DrawOptions(n_max=3))
        assert outcome.findings == []

    def test_needs_trials(self):
        with pytest.raises(ParameterOutOfRangeError):
            hunt("scalar-fejer", 0, seed=1)
