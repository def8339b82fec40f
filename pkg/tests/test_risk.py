import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mvrisk.core.errors import DimensionMismatchError, EmptyConditionError, MultiplePlepsError, NotUnivariateError
from mvrisk.core.laws import check_ordering_instance, random_instance
from mvrisk.core.models import UNDEFINED, ConfidenceLevel, MVaRSet, RiskVector, ScalarizationWeights
from mvrisk.core.quantile import enumerate_mvar, quantile_point
from mvrisk.core.risk import (
    classify_desirable,
    cte_lower,
    full_report,
    marginal_cvar,
    mcvar_at,
    mcvar_bar_scalar,
    mcvar_conditional,
    scalarize,
    univariate_cvar,
    vmcvar,
    vmcvar_bar,
)
from mvrisk.core.scenario import sum_scenarios

P6 = ConfidenceLevel(0.6)
P9 = ConfidenceLevel(0.9)
HALF = ScalarizationWeights((0.5, 0.5))


def test_univariate_cvar(make_scenarios):
    assert univariate_cvar(make_scenarios([[1], [2], [3], [4], [5]]), P6) == pytest.approx((3.0, 4.5))
    assert univariate_cvar(make_scenarios([[7]]), ConfidenceLevel(0.5)) == (7.0, 7.0)
    assert univariate_cvar(make_scenarios([[0], [0], [0]]), P6) == (0.0, 0.0)


def test_univariate_cvar_minimizes_the_threshold_expression(make_scenarios):
    values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    scenarios = make_scenarios(values[:, None])
    brute = min(eta + np.mean(np.maximum(values - eta, 0.0)) / 0.4 for eta in values)
    assert univariate_cvar(scenarios, P6)[1] == pytest.approx(brute)


def test_univariate_cvar_needs_one_criterion(example_y):
    with pytest.raises(NotUnivariateError):
        univariate_cvar(example_y, P6)


def test_mcvar_at(example_y):
    at_33 = mcvar_at(example_y, (3, 3), P6)
    assert at_33.value == pytest.approx((3.5, 4.0))
    assert at_33.conditioning_mass == pytest.approx(0.4)
    assert mcvar_at(example_y, (2, 5), P6).value == pytest.approx((3.5, 5.0))


def test_mcvar_at_top_corner_is_the_corner(example_y):
    corner = mcvar_at(example_y, (4, 5), P6)
    assert corner.value == (4.0, 5.0)
    assert corner.conditioning_mass == 0.0


def test_mcvar_at_checks_dimension(example_y):
    with pytest.raises(DimensionMismatchError):
        mcvar_at(example_y, (1, 2, 3), P6)


def test_mcvar_conditional(example_y, heavy_middle):
    equal = mcvar_conditional(example_y, (3, 3), P6)
    assert equal.value == pytest.approx((3.5, 4.0))
    assert not equal.hypothesis_violated
    assert mcvar_conditional(heavy_middle, (4, 4), P9).value == pytest.approx((4.5, 4.5))


def test_mcvar_conditional_flags_the_hypothesis(example_y):
    flagged = mcvar_conditional(example_y, (3, 5), P6)
    assert flagged.hypothesis_violated
    assert flagged.value == pytest.approx((4.0, 5.0))


def test_mcvar_conditional_empty_condition(example_y):
    with pytest.raises(EmptyConditionError):
        mcvar_conditional(example_y, (10, 10), P6)


def test_vmcvar(example_y):
    risk_set = vmcvar(example_y, P6)
    assert risk_set.values == [pytest.approx((3.5, 4.0))]
    assert risk_set.vectors[0].anchor.eta == (3.0, 3.0)


def test_vmcvar_of_sum_pair(partner_x, example_y):
    # the vector at (5, 6.5) dominates those at (4, 7) and (8, 6)
    risk_set = vmcvar(sum_scenarios(partner_x, example_y), P6)
    assert risk_set.values == [pytest.approx((6.5, 6.75))]
    assert risk_set.vectors[0].anchor.eta == (5.0, 6.5)
    assert mcvar_at(sum_scenarios(partner_x, example_y), (4, 7), P6).value == pytest.approx((6.5, 7.0))
    assert mcvar_at(sum_scenarios(partner_x, example_y), (8, 6), P6).value == pytest.approx((8.0, 6.75))


def test_vmcvar_univariate(make_scenarios):
    risk_set = vmcvar(make_scenarios([[1], [2], [3], [4], [5]]), P6)
    assert risk_set.values == [pytest.approx((4.5,))]


def test_vmcvar_univariate_reduction_on_random_instances():
    for trial in range(300):
        scenarios, level = random_instance(np.random.default_rng((3, trial)), dims=(1,))
        values = vmcvar(scenarios, level).values
        assert len(values) == 1
        assert values[0][0] == pytest.approx(univariate_cvar(scenarios, level)[1], abs=1e-9)


def test_vmcvar_lies_above_its_anchor(heavy_middle):
    for vector in vmcvar(heavy_middle, P9):
        assert all(v >= e for v, e in zip(vector.value, vector.anchor.eta))
    assert vmcvar(heavy_middle, P9).values == [pytest.approx((4.5, 4.5))]


def test_conditional_form_matches_on_random_instances():
    checked = 0
    for trial in range(1000):
        scenarios, level = random_instance(np.random.default_rng((11, trial)))
        for point in enumerate_mvar(scenarios, level):
            if abs(point.cdf - level.p) > 1e-12 or len(point.covered) == scenarios.n:
                continue
            expected = mcvar_at(scenarios, point.eta, level).value
            assert mcvar_conditional(scenarios, point.eta, level).value == pytest.approx(expected, abs=1e-9)
            checked += 1
    assert checked > 0


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(eta=st.lists(st.floats(-10, 10), min_size=2, max_size=2), p=st.floats(0.05, 0.95))
def test_mcvar_is_conservative(example_y, eta, p):
    value = mcvar_at(example_y, eta, ConfidenceLevel(p)).value
    assert all(v >= e for v, e in zip(value, eta))


def test_classify_desirable(anti_diagonal, heavy_middle, make_scenarios):
    assert classify_desirable(anti_diagonal, enumerate_mvar(anti_diagonal, P6)).undesirable == ()
    assert classify_desirable(heavy_middle, enumerate_mvar(heavy_middle, P9)).undesirable == (0, 4)
    single = make_scenarios([(3, 3)])
    assert classify_desirable(single, enumerate_mvar(single, P6)).desirable == (0,)


def test_mcvar_bar_scalar(anti_diagonal, heavy_middle):
    assert mcvar_bar_scalar(anti_diagonal, P6, HALF) is UNDEFINED
    assert mcvar_bar_scalar(heavy_middle, P9, HALF) == pytest.approx(3.0)
    assert mcvar_bar_scalar(heavy_middle, P9, ScalarizationWeights((1.0, 0.0))) == pytest.approx(3.0)


def test_mcvar_bar_scalar_sits_below_the_efficient_point(heavy_middle):
    assert mcvar_bar_scalar(heavy_middle, P9, HALF) < HALF.apply((4.0, 4.0))


def test_mcvar_bar_scalar_checks_dimension(heavy_middle):
    with pytest.raises(DimensionMismatchError):
        mcvar_bar_scalar(heavy_middle, P9, ScalarizationWeights((0.2, 0.3, 0.5)))


@pytest.mark.parametrize("p", [0.4, 0.45, 0.5, 0.6, 0.7, 0.75, 0.8])
def test_anti_diagonal_comparators_are_undefined(anti_diagonal, p):
    level = ConfidenceLevel(p)
    assert len(vmcvar(anti_diagonal, level)) > 0
    assert mcvar_bar_scalar(anti_diagonal, level, HALF) is UNDEFINED
    assert cte_lower(anti_diagonal, level).value is UNDEFINED


def test_vmcvar_bar(heavy_middle, single_plep):
    assert vmcvar_bar(heavy_middle, P9).value == pytest.approx((3.0, 3.0))
    assert vmcvar_bar(heavy_middle, P9, strict_exceedance=True).value == pytest.approx((3.0, 3.0))
    bar = vmcvar_bar(single_plep, ConfidenceLevel(0.75))
    assert bar.value == pytest.approx((10 / 3, 10 / 3))
    assert bar.conditioning_mass == pytest.approx(0.75)


def test_vmcvar_bar_undefined_above_every_outcome(example_y):
    level = ConfidenceLevel(0.6)
    above = MVaRSet(level=level, points=(quantile_point(example_y, (10, 10)),))
    assert vmcvar_bar(example_y, level, mvar=above).value is UNDEFINED


def test_vmcvar_bar_needs_a_single_point(example_y):
    with pytest.raises(MultiplePlepsError):
        vmcvar_bar(example_y, P6)


def test_vmcvar_bar_relaxed(example_y):
    relaxed = vmcvar_bar(example_y, P6, relaxed=True)
    assert relaxed.value == pytest.approx((4.0, 1.5))
    assert relaxed.conditioning_mass == pytest.approx(0.2)
    assert relaxed.flags == frozenset({"relaxed"})
    strict = vmcvar_bar(example_y, P6, strict_exceedance=True, relaxed=True)
    assert strict == relaxed


def test_vmcvar_bar_relaxed_skips_desirable_scenarios(anti_diagonal, example_y):
    assert vmcvar_bar(anti_diagonal, P6, relaxed=True).value is UNDEFINED
    mvar = enumerate_mvar(example_y, P6)
    value = vmcvar_bar(example_y, P6, relaxed=True, mvar=mvar).value
    assert not any(all(v <= e for v, e in zip(value, eta)) for eta in mvar.etas)


def test_cte_lower(single_plep, make_scenarios):
    assert cte_lower(single_plep, ConfidenceLevel(0.75)).value == pytest.approx((5.0, 5.0))
    assert cte_lower(make_scenarios([(2, 9)]), ConfidenceLevel(0.3)).value == (2.0, 9.0)


def test_marginal_cvar(example_y):
    assert marginal_cvar(example_y, P6).value == pytest.approx((3.5, 4.0))


def test_marginal_cvar_bounds_every_anchor(example_y, anti_diagonal):
    for scenarios in (example_y, anti_diagonal):
        bound = marginal_cvar(scenarios, P6).value
        for point in enumerate_mvar(scenarios, P6):
            value = mcvar_at(scenarios, point.eta, P6).value
            assert all(b <= v + 1e-9 for b, v in zip(bound, value))


def test_scalarize():
    assert scalarize(RiskVector(value=(2.0, 4.0)), HALF) == 3.0
    assert scalarize(RiskVector(value=UNDEFINED), HALF) is UNDEFINED


def test_full_report(example_y):
    report = full_report(example_y, P6)
    assert report.mvar.etas == [(2.0, 5.0), (3.0, 3.0)]
    assert report.vmcvar.values == [pytest.approx((3.5, 4.0))]
    assert report.vmcvar_bar.value is UNDEFINED
    assert "multiple_pleps" in report.vmcvar_bar.flags
    assert report.mcvar_bar_scalar is None
    assert report.scalarized is None


def test_full_report_with_weights(anti_diagonal):
    report = full_report(anti_diagonal, P6, HALF)
    assert len(report.vmcvar) > 0
    assert report.mcvar_bar_scalar is UNDEFINED
    assert report.cte.value is UNDEFINED
    assert report.scalarized.cte is UNDEFINED
    assert len(report.scalarized.vmcvar) == len(report.vmcvar)


def test_full_report_is_deterministic(example_y):
    assert full_report(example_y, P6, HALF) == full_report(example_y, P6, HALF)


def test_ordering_on_single_point_instance(single_plep):
    report = check_ordering_instance(single_plep, ConfidenceLevel(0.75))
    assert report is not None
    assert report.violations == () and report.counterexamples == ()


def test_ordering_excludes_undefined_cte(heavy_middle):
    assert cte_lower(heavy_middle, P9).value is UNDEFINED
    assert check_ordering_instance(heavy_middle, P9) is None


def test_ordering_excludes_several_points(example_y):
    assert check_ordering_instance(example_y, P6) is None


def test_cte_can_sit_below_vmcvar(make_scenarios):
    scenarios = make_scenarios([(1, 3), (3, 1), (2, 3), (9, 2), (4, 4)])
    assert vmcvar(scenarios, P6).values == [pytest.approx((6.5, 3.5))]
    assert cte_lower(scenarios, P6).value == pytest.approx((4.0, 4.0))
    report = check_ordering_instance(scenarios, P6)
    assert report.violations == ()
    assert len(report.counterexamples) == 1
