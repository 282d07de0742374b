"""Tests for core/checks.py: theorem checkers, hypothesis gating and the registry."""

import math

import numpy as np
import pytest

from core.checks import (
    THEOREMS,
    CheckInputs,
    Verdict,
    _Path,
    check_chebyshev_am_bound,
    check_chebyshev_variance,
    check_eig_product_fejer,
    check_general_levin_steckin,
    check_levin_steckin_refined,
    check_log_fejer,
    check_matrix_fejer_lower,
    check_matrix_fejer_upper,
    check_moment_corollary,
    check_mond_pecaric_reverse,
    check_operator_levin_steckin,
    check_scalar_fejer,
    check_scalar_levin_steckin,
    run_check,
    scalar_slack,
    theorem_ids,
)
from core.errors import UnknownIdError
from core.funcspace import lookup_function, lookup_weight, piecewise_linear_weight
from core.generators import random_pair
from core.linalg import UNIT_INTERVAL, HermitianMatrix, Interval
from core.orders import Tolerances
from core.prng import SplitMix64, derive_seed
from core.quadrature import DEFAULT_RULE, QuadratureRule, integrate_scalar, weight_total
from tests.conftest import (
    DIAGONAL_FEJER_SLACKS,
    EIG_PRODUCTS_LHS,
    EIG_PRODUCTS_RHS,
    HERMITE_HADAMARD_CHAIN,
    LOG_FEJER_LHS,
    LOG_FEJER_RHS,
    MOND_PECARIC_BETA,
    NEGATIVE_CONTROL_INT_PF,
    NEGATIVE_CONTROL_RHS,
    NEGATIVE_CONTROL_SLACK,
)

f_ = lookup_function
p_ = lookup_weight


class TestScalarSlack:
    def test_tolerance_scales_with_magnitude(self):
        s = scalar_slack("x", 1e6 + 1e-3, 1e6, Tolerances(1e-9, 1e-8))
        assert s.holds
        assert s.slack == pytest.approx(-1e-3, rel=1e-3)

    def test_violation(self):
        s = scalar_slack("x", 1.0, 0.5)
        assert not s.holds
        assert s.margin == pytest.approx(-0.5)


class TestScalarLevinSteckin:
    def test_square_tent_passes(self):
        result = check_scalar_levin_steckin(f_("square"), p_("tent"))
        assert result.verdict is Verdict.PASS
        assert result.margin > 0

    def test_vee_is_gated(self):
        """p = |t - 1/2| fails the monotone-weight hypothesis; no evaluation happens."""
        result = check_scalar_levin_steckin(f_("shiftsq"), p_("vee"))
        assert result.verdict is Verdict.HYPOTHESIS_UNMET
        assert result.verdicts == []
        unmet = [h.flag for h in result.hypotheses if not h.satisfied]
        assert unmet == ["nondecreasing"]

    def test_negative_control_forced(self):
        result = check_scalar_levin_steckin(f_("shiftsq"), p_("vee"), force=True)
        assert result.verdict is Verdict.VIOLATED
        assert result.forced
        (slack,) = result.verdicts
        assert slack.lhs == pytest.approx(NEGATIVE_CONTROL_INT_PF, abs=1e-9)
        assert slack.rhs == pytest.approx(NEGATIVE_CONTROL_RHS, abs=1e-9)
        assert slack.slack == pytest.approx(NEGATIVE_CONTROL_SLACK, abs=1e-9)
        assert result.margin == pytest.approx(NEGATIVE_CONTROL_SLACK, abs=1e-9)

    def test_waived_flag_recorded(self):
        result = check_scalar_levin_steckin(f_("shiftsq"), p_("vee"),
                                            waive=frozenset({"nondecreasing"}))
        assert result.verdict is Verdict.VIOLATED
        assert result.waived == ("nondecreasing",)
        assert any(h.waived for h in result.hypotheses)

    def test_asymmetric_weight_gated(self):
        result = check_scalar_levin_steckin(f_("square"), p_("asym"))
        assert result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_domain_mismatch_is_error(self):
        result = check_scalar_levin_steckin(f_("neg_log"), p_("one"))
        assert result.verdict is Verdict.ERROR
        assert "DomainMismatchError" in result.error


class TestScalarFejer:
    def test_hermite_hadamard_chain(self):
        result = check_scalar_fejer(f_("square"), p_("one"), 0.0, 1.0)
        assert result.verdict is Verdict.PASS
        chain = result.quantities["chain"]
        for got, want in zip(chain, HERMITE_HADAMARD_CHAIN):
            assert got == pytest.approx(want, abs=1e-10)
        lower, upper = result.verdicts
        assert lower.slack == pytest.approx(1.0 / 12.0, abs=1e-10)
        assert upper.slack == pytest.approx(1.0 / 6.0, abs=1e-10)

    def test_kink_of_abs_shift(self):
        result = check_scalar_fejer(f_("abs_shift"), p_("tent"), 0.0, 1.0)
        assert result.verdict is Verdict.PASS
        # tent * |t - 1/2| integrates to 1/24
        assert result.quantities["chain"][1] == pytest.approx(1.0 / 24.0, abs=1e-12)

    def test_concave_gated(self):
        result = check_scalar_fejer(f_("scaled:square:0.0:-1.0"), p_("one"), 0.0, 1.0)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_sampled_convexity_on_sub_interval(self):
        """sin is convex on [pi, 2 pi] though it carries no convex flag."""
        result = check_scalar_fejer(f_("sin"), p_("one"), math.pi, 2.0 * math.pi)
        assert result.verdict is Verdict.PASS


class TestGeneralLevinSteckin:
    def test_square_one(self):
        result = check_general_levin_steckin(f_("square"), p_("one"))
        assert result.verdict is Verdict.PASS
        for slack in result.verdicts:
            assert slack.slack == pytest.approx(1.0 / 6.0, abs=1e-10)

    def test_asymmetric_weight_allowed(self):
        assert check_general_levin_steckin(f_("exp"), p_("asym")).verdict is Verdict.PASS

    def test_non_differentiable_gated(self):
        result = check_general_levin_steckin(f_("abs_shift"), p_("one"))
        assert result.verdict is Verdict.HYPOTHESIS_UNMET
        assert [h.flag for h in result.hypotheses if not h.satisfied] == ["differentiable"]


class TestMomentCorollary:
    def test_exp_tent(self):
        assert check_moment_corollary(f_("exp"), p_("tent")).verdict is Verdict.PASS

    def test_asymmetric_forced_violates(self):
        result = check_moment_corollary(f_("exp"), p_("asym"), force=True)
        assert result.verdict is Verdict.VIOLATED


class TestRefined:
    def test_square_one(self):
        result = check_levin_steckin_refined(f_("square"), p_("one"))
        assert result.verdict is Verdict.PASS
        # bracket_p vanishes for p = 1
        assert result.quantities["bracket_p"] == pytest.approx(0.0, abs=1e-12)

    def test_reverse_form(self):
        result = check_levin_steckin_refined(f_("square"), p_("tent"), reverse=True)
        assert result.verdict is Verdict.PASS
        assert result.verdicts[0].name == "refined-reverse"
        assert result.instance["reverse"] is True

    def test_vee_forced_brackets(self):
        result = check_levin_steckin_refined(f_("shiftsq"), p_("vee"), force=True)
        assert result.quantities["bracket_p"] == pytest.approx(1.0 / 48.0, abs=1e-10)
        assert result.quantities["bracket_f"] == pytest.approx(1.0 / 180.0, abs=1e-10)
        assert result.verdict is Verdict.VIOLATED


class TestChebyshev:
    def test_affine_pair_variance_bounds(self):
        result = check_chebyshev_variance(f_("exp"), f_("scaled:exp:0.5:2.0"), 0.0, 1.0)
        assert result.verdict is Verdict.PASS
        assert result.quantities["mode"] == "synchronous"
        lower, upper = result.verdicts
        assert lower.holds and upper.holds

    def test_asynchronous_mode_inferred(self):
        result = check_chebyshev_variance(f_("square"), f_("scaled:square:0.0:-1.0"), 0.0, 1.0)
        assert result.quantities["mode"] == "asynchronous"
        assert result.verdict is Verdict.PASS

    def test_mode_mismatch_gated(self):
        result = check_chebyshev_variance(f_("square"), f_("exp"), 0.0, 1.0,
                                          mode="asynchronous")
        assert result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_neither_pair_gated(self):
        result = check_chebyshev_variance(f_("identity"), f_("shiftsq"), 0.0, 1.0)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_min_variance_bound_can_fail(self):
        result = check_chebyshev_variance(f_("reciprocal"), f_("neg_log"), 0.5, 2.0, force=True)
        lower, upper = result.verdicts
        assert not lower.holds
        assert upper.holds

    def test_am_bound(self):
        result = check_chebyshev_am_bound(f_("square"), f_("exp"))
        assert result.verdict is Verdict.PASS
        assert result.quantities["covariance"] > 0


class TestMatrixFejer:
    def test_lower_diagonal_slacks(self, diag_pair):
        result = check_matrix_fejer_lower(f_("square"), p_("one"), *diag_pair)
        assert result.verdict is Verdict.PASS
        (verdict,) = result.verdicts
        assert verdict.detail == pytest.approx(DIAGONAL_FEJER_SLACKS, abs=1e-9)

    def test_upper_diagonal(self, diag_pair):
        result = check_matrix_fejer_upper(f_("square"), p_("one"), *diag_pair)
        assert result.verdict is Verdict.PASS
        # lhs diag(1/3, 1/3), rhs (f(A) + f(B))/2 = diag(1/2, 1/2)
        assert result.verdicts[0].detail == pytest.approx((1.0 / 6.0, 1.0 / 6.0), abs=1e-9)

    def test_lower_random(self):
        a, b = random_pair(5, 4, Interval(0.5, 2.0))
        for f_id in ("exp", "reciprocal", "square"):
            assert check_matrix_fejer_lower(f_(f_id), p_("tent"), a, b).verdict is Verdict.PASS

    def test_upper_needs_monotone(self):
        a = HermitianMatrix.diagonal([-1.0, 1.0])
        b = HermitianMatrix.diagonal([1.0, -1.0])
        result = check_matrix_fejer_upper(f_("shiftsq"), p_("one"), a, b)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET

    def test_spectrum_outside_domain_is_error(self):
        a = HermitianMatrix.diagonal([-1.0, 1.0])
        result = check_matrix_fejer_lower(f_("reciprocal"), p_("one"), a, a)
        assert result.verdict in (Verdict.ERROR, Verdict.HYPOTHESIS_UNMET)
        forced = check_matrix_fejer_lower(f_("reciprocal"), p_("one"), a, a, force=True)
        assert forced.verdict is Verdict.ERROR


class TestLogFejer:
    def test_exp_diagonal(self, diag_pair):
        result = check_log_fejer(f_("exp"), p_("one"), *diag_pair)
        assert result.verdict is Verdict.PASS
        lhs = result.quantities["lhs_eigenvalues"]
        rhs = result.quantities["rhs_eigenvalues"]
        assert lhs == pytest.approx([LOG_FEJER_LHS] * 2, abs=1e-8)
        assert rhs == pytest.approx([LOG_FEJER_RHS] * 2, abs=1e-8)

    def test_eig_products(self, diag_pair):
        result = check_eig_product_fejer(f_("exp"), p_("one"), *diag_pair)
        assert result.verdict is Verdict.PASS
        assert result.quantities["lhs_products"] == pytest.approx(list(EIG_PRODUCTS_LHS), abs=1e-8)
        assert result.quantities["rhs_products"] == pytest.approx(list(EIG_PRODUCTS_RHS), abs=1e-8)

    def test_normalization_irrelevant(self, diag_pair):
        """Scaling p does not change the log-Fejer margin."""
        one = check_log_fejer(f_("exp"), p_("one"), *diag_pair)
        two = check_log_fejer(f_("exp"), piecewise_linear_weight("two", 2.0, [0.0]), *diag_pair)
        assert one.verdict is two.verdict is Verdict.PASS
        assert two.margin == pytest.approx(one.margin, abs=1e-12)
        assert two.quantities["weight_total"] == pytest.approx(2.0)

    def test_square_not_log_convex(self, diag_pair):
        a, b = (m + HermitianMatrix.identity(2) for m in diag_pair)
        result = check_log_fejer(f_("square"), p_("one"), a, b)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET


class TestOperatorLevinSteckin:
    def test_random_instances(self):
        for i in range(5):
            a, b = random_pair(derive_seed(3, i), 3, Interval(0.5, 2.0))
            for f_id in ("square", "reciprocal"):
                result = check_operator_levin_steckin(f_(f_id), p_("tent"), a, b)
                assert result.verdict is Verdict.PASS, (i, f_id)

    def test_exp_not_operator_convex(self, diag_pair):
        result = check_operator_levin_steckin(f_("exp"), p_("tent"), *diag_pair)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET


class TestMondPecaric:
    def test_beta_and_margin(self, diag_pair):
        result = check_mond_pecaric_reverse(f_("square"), p_("one"), *diag_pair, alpha=1.0)
        assert result.verdict is Verdict.PASS
        assert result.quantities["beta"] == pytest.approx(MOND_PECARIC_BETA, abs=1e-9)
        assert result.quantities["interval_source"] == "spectral-hull"
        assert result.margin == pytest.approx(0.25, abs=1e-8)

    def test_override_must_enclose(self, diag_pair):
        result = check_mond_pecaric_reverse(f_("square"), p_("one"), *diag_pair, alpha=1.0,
                                            m=0.2, big_m=1.0)
        assert result.verdict is Verdict.HYPOTHESIS_UNMET
        assert [h.flag for h in result.hypotheses if not h.satisfied] == ["enclosing"]

    def test_wider_override(self, diag_pair):
        result = check_mond_pecaric_reverse(f_("square"), p_("one"), *diag_pair, alpha=1.0,
                                            m=0.0, big_m=2.0)
        assert result.verdict is Verdict.PASS
        assert result.quantities["interval_source"] == "override"

    def test_degenerate_spectrum(self):
        a = HermitianMatrix.identity(2)
        result = check_mond_pecaric_reverse(f_("exp"), p_("one"), a, a, alpha=0.5)
        assert result.verdict is Verdict.PASS
        assert result.quantities["beta"] == pytest.approx(0.5 * math.e)

    def test_random_alpha(self):
        a, b = random_pair(12, 3, Interval(0.5, 2.0))
        for alpha in (0.0, 0.5, 1.0, 1.7):
            result = check_mond_pecaric_reverse(f_("reciprocal"), p_("parabola_bump"), a, b, alpha)
            assert result.verdict is Verdict.PASS, alpha


def _diagonal_pairs(seed: int, lo: float = 0.0, count: int = 100, n: int = 3):
    """Seeded diagonal entries x, y drawn from [lo, lo + 1)."""
    for i in range(count):
        rng = SplitMix64(derive_seed(seed, i))
        x = lo + np.array([rng.uniform() for _ in range(n)])
        y = lo + np.array([rng.uniform() for _ in range(n)])
        yield x, y


def _entry_integrals(f, p, x, y, weighted: bool = True) -> np.ndarray:
    """int p(t) f((1-t) x_i + t y_i) dt entry by entry, split at each entry's kink."""
    rule = QuadratureRule(panels=64)
    out = []
    for xi, yi in zip(x, y):
        edges = set(p.breakpoints)
        for k in f.kinks:
            if xi != yi and 0.0 < (k - xi) / (yi - xi) < 1.0:
                edges.add((k - xi) / (yi - xi))

        def g(t, xi=xi, yi=yi):
            w = float(p.eval(t)) if weighted else 1.0
            return w * float(f.eval(xi + (yi - xi) * t))

        out.append(integrate_scalar(g, UNIT_INTERVAL, rule, tuple(sorted(edges))))
    return np.array(out)


def _desc(values) -> np.ndarray:
    return np.sort(np.asarray(values, dtype=float))[::-1]


class TestDiagonalReduction:
    """On diagonal pairs every matrix check reduces to per-entry scalar integrals."""

    def test_fejer_lower_square(self):
        square, p = f_("square"), p_("one")
        rule = QuadratureRule()
        for a_vals, b_vals in _diagonal_pairs(8):
            a, b = HermitianMatrix.diagonal(a_vals), HermitianMatrix.diagonal(b_vals)
            # int_0^1 ((1-t)x + ty)^2 dt = (x^2 + xy + y^2)/3
            integral = _desc((a_vals ** 2 + a_vals * b_vals + b_vals ** 2) / 3.0)
            midpoint = _desc(((a_vals + b_vals) / 2.0) ** 2)
            expected = np.cumsum(integral) - np.cumsum(midpoint)
            result = check_matrix_fejer_lower(square, p, a, b, rule=rule)
            assert np.max(np.abs(np.array(result.verdicts[0].detail) - expected)) <= 1e-9

    def test_fejer_lower_abs_shift_tent(self):
        f, p = f_("abs_shift"), p_("tent")
        total = weight_total(p)
        for x, y in _diagonal_pairs(81):
            result = check_matrix_fejer_lower(f, p, HermitianMatrix.diagonal(x),
                                              HermitianMatrix.diagonal(y))
            assert result.verdict is Verdict.PASS
            expected = (np.cumsum(_desc(_entry_integrals(f, p, x, y)))
                        - np.cumsum(_desc(total * f.eval((x + y) / 2.0))))
            assert np.max(np.abs(np.array(result.verdicts[0].detail) - expected)) <= 1e-9

    def test_fejer_upper_exp_tent(self):
        f, p = f_("exp"), p_("tent")
        total = weight_total(p)
        for x, y in _diagonal_pairs(82):
            result = check_matrix_fejer_upper(f, p, HermitianMatrix.diagonal(x),
                                              HermitianMatrix.diagonal(y))
            assert result.verdict is Verdict.PASS
            q = result.quantities
            lhs = _desc(_entry_integrals(f, p, x, y))
            assert np.max(np.abs(q["lhs_eigenvalues"] - lhs)) <= 1e-9
            rhs = _desc(0.5 * total * (np.exp(x) + np.exp(y)))
            assert np.max(np.abs(q["rhs_eigenvalues"] - rhs)) <= 1e-9

    def test_log_fejer_reciprocal_tent(self):
        f, p = f_("reciprocal"), p_("tent")
        total = weight_total(p)
        for x, y in _diagonal_pairs(83, lo=0.5):
            result = check_log_fejer(f, p, HermitianMatrix.diagonal(x), HermitianMatrix.diagonal(y))
            assert result.verdict is Verdict.PASS
            q = result.quantities
            assert np.max(np.abs(q["lhs_eigenvalues"] - _desc(-np.log((x + y) / 2.0)))) <= 1e-9
            rhs = _desc(np.log(_entry_integrals(f, p, x, y) / total))
            assert np.max(np.abs(q["rhs_eigenvalues"] - rhs)) <= 1e-9

    def test_eig_products_exp_one(self):
        f, p = f_("exp"), p_("one")
        for x, y in _diagonal_pairs(84):
            result = check_eig_product_fejer(f, p, HermitianMatrix.diagonal(x),
                                             HermitianMatrix.diagonal(y))
            assert result.verdict is Verdict.PASS
            q = result.quantities
            np.testing.assert_allclose(q["lhs_products"], np.cumprod(_desc(np.exp((x + y) / 2.0))),
                                       rtol=1e-9, atol=1e-9)
            np.testing.assert_allclose(q["rhs_products"],
                                       np.cumprod(_desc(_entry_integrals(f, p, x, y))),
                                       rtol=1e-9, atol=1e-9)

    def test_operator_levin_steckin_square_tent(self):
        f, p = f_("square"), p_("tent")
        total = weight_total(p)
        for x, y in _diagonal_pairs(85):
            result = check_operator_levin_steckin(f, p, HermitianMatrix.diagonal(x),
                                                  HermitianMatrix.diagonal(y))
            assert result.verdict is Verdict.PASS
            plain = _entry_integrals(f, p, x, y, weighted=False)
            gap = total * plain - _entry_integrals(f, p, x, y)
            assert np.max(np.abs(np.array(result.verdicts[0].detail) - np.sort(gap))) <= 1e-9

    def test_mond_pecaric_abs_shift_tent(self):
        f, p = f_("abs_shift"), p_("tent")
        total = weight_total(p)
        for x, y in _diagonal_pairs(86):
            result = check_mond_pecaric_reverse(f, p, HermitianMatrix.diagonal(x),
                                                HermitianMatrix.diagonal(y), alpha=1.0)
            assert result.verdict is Verdict.PASS
            beta = result.quantities["beta"]
            gap = (beta * total + _entry_integrals(f, p, x, y)
                   - total * _entry_integrals(f, p, x, y, weighted=False))
            assert np.max(np.abs(np.array(result.verdicts[0].detail) - np.sort(gap))) <= 1e-9


class TestKinkCrossings:
    def test_scalar_pair_margin(self):
        """|x - 1/2| along -0.3 -> 0.9 integrates to 1/3 against f(0.3) = 0.2."""
        result = check_matrix_fejer_lower(f_("abs_shift"), p_("one"),
                                          HermitianMatrix.diagonal([-0.3]),
                                          HermitianMatrix.diagonal([0.9]))
        assert result.verdict is Verdict.PASS
        assert result.margin == pytest.approx(1.0 / 3.0 - 0.2, abs=1e-12)

    def test_diagonal_crossings(self):
        path = _Path(f_("abs_shift"), HermitianMatrix.diagonal([0.0, 0.9]),
                     HermitianMatrix.diagonal([0.8, 0.1]))
        assert path.kink_crossings() == pytest.approx((0.5, 0.625), abs=1e-12)

    def test_crossings_invariant_under_rotation(self):
        c, s = math.cos(0.7), math.sin(0.7)
        u = np.array([[c, -s], [s, c]])
        a = HermitianMatrix(u @ np.diag([0.0, 0.9]) @ u.T)
        b = HermitianMatrix(u @ np.diag([0.8, 0.1]) @ u.T)
        crossings = _Path(f_("abs_shift"), a, b).kink_crossings()
        assert crossings == pytest.approx((0.5, 0.625), abs=1e-10)

    def test_weight_breakpoints_kept(self):
        path = _Path(f_("abs_shift"), HermitianMatrix.diagonal([0.0]),
                     HermitianMatrix.diagonal([0.8]))
        assert path.breakpoints(p_("tent")) == pytest.approx((0.5, 0.625))

    def test_smooth_function_has_none(self):
        a, b = random_pair(3, 3, Interval(0.0, 1.0))
        assert _Path(f_("exp"), a, b).kink_crossings() == ()

    def test_margin_stable_under_refinement(self):
        f, p = f_("abs_shift"), p_("one")
        for seed in range(10):
            a, b = random_pair(seed, 3, Interval(0.0, 1.0))
            coarse = check_matrix_fejer_lower(f, p, a, b, rule=DEFAULT_RULE)
            fine = check_matrix_fejer_lower(f, p, a, b, rule=DEFAULT_RULE.refined())
            assert abs(coarse.margin - fine.margin) <= 1e-8, seed


class TestRegistry:
    def test_thirteen_theorems(self):
        assert len(THEOREMS) == 13
        assert theorem_ids() == sorted(THEOREMS)

    def test_unknown_theorem(self):
        with pytest.raises(UnknownIdError):
            run_check("nope", CheckInputs(f=f_("square")))

    def test_dispatch(self, diag_pair):
        inputs = CheckInputs(f=f_("square"), p=p_("one"), matrix_a=diag_pair[0],
                             matrix_b=diag_pair[1])
        result = run_check("matrix-fejer-lower", inputs)
        assert result.theorem_id == "matrix-fejer-lower"
        assert result.verdict is Verdict.PASS

    def test_result_serializes(self, diag_pair):
        inputs = CheckInputs(f=f_("square"), p=p_("one"), matrix_a=diag_pair[0],
                             matrix_b=diag_pair[1], alpha=1.0)
        d = run_check("mond-pecaric-reverse", inputs).to_dict()
        assert d["verdict"] == "pass"
        assert d["instance"]["rule"]["scheme"] == "gauss"
        assert isinstance(d["quantities"]["beta"], float)
