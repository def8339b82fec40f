"""
Property checks for the vector-valued multivariate CVaR.

Each check returns a LawReport. Proven statements land in ``violations``; literal claims that
are known to fail on some instances are still evaluated, and their failures land in
``counterexamples`` so they are reported without failing the run.

Random instances use equal probabilities 1/n and levels k/n, so P(X <= eta) = p holds
exactly on many of them. Every instance is derived from (seed, trial) alone.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from mvrisk.config.config import config
from mvrisk.core.errors import SpaceMismatchError
from mvrisk.core.models import ConfidenceLevel, Law, LawReport, ScenarioSet, Vector, Violation
from mvrisk.core.quantile import enumerate_mvar
from mvrisk.core.risk import cte_lower, marginal_cvar, mcvar_at, vmcvar, vmcvar_bar
from mvrisk.core.scenario import scale_scenarios, sum_scenarios, translate_scenarios, zero_scenarios
from mvrisk.utils.vectors import close, contains, weakly_below

Seed = Optional[Tuple[int, int]]

PAIRED_X = [(1, 5), (3, 2), (2, 1), (1, 4), (5, 5)]
PAIRED_Y = [(4, 1.5), (1, 3), (2, 5), (2, 3), (3, 1)]
PAIRED_GOLDEN = {
    "vmcvar_x": [(4.0, 5.0)],
    "vmcvar_y": [(3.5, 4.0)],
    "mvar_sum": [(4.0, 7.0), (5.0, 6.5), (8.0, 6.0)],
    "vmcvar_sum": [(6.5, 6.75)],
}

SPLIT_X = [(10, 0), (0, 0), (9, 0), (1, 0)]
SPLIT_Y = [(0, 0), (0, 10), (0, 1), (0, 9)]
SPLIT_PROBS = [0.3, 0.3, 0.2, 0.2]
SPLIT_GOLDEN = {
    "vmcvar_x": [(9.6, 0.0)],
    "vmcvar_y": [(0.0, 9.6)],
    "vmcvar_sum": [(9.6, 10.0), (10.0, 9.6)],
}


def _listed(vectors: Sequence[Sequence[float]]) -> List[List[float]]:
    return [[float(value) for value in vector] for vector in vectors]


def _same_set(actual: Sequence[Vector], expected: Sequence[Vector], tol: float) -> bool:
    return len(actual) == len(expected) and all(contains(actual, vector, tol) for vector in expected)


def check_normalized(level: ConfidenceLevel, dim: int = 2, seed: Seed = None) -> LawReport:
    """
    VMCVaR of the zero vector is the zero vector alone.

    :param level: Confidence level.
    :param dim: Number of criteria of the zero vector.
    :param seed: Provenance recorded on violations.
    :return: Report over one instance.
    """
    values = vmcvar(zero_scenarios(dim), level).values
    zero = (0.0,) * dim
    violations = ()
    if len(values) != 1 or not close(values[0], zero, config.law_tol):
        violations = (Violation(seed, {"p": level.p, "vmcvar": _listed(values)}),)
    return LawReport(law=Law.NORMALIZED, instances_tested=1, violations=violations)


def check_homogeneous(scenarios: ScenarioSet, level: ConfidenceLevel, k: float, seed: Seed = None) -> LawReport:
    """
    Every k * v with v in VMCVaR(X) belongs to VMCVaR(kX).

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param k: Nonnegative factor.
    :param seed: Provenance recorded on violations.
    :return: Report over one instance.
    :raises NegativeScaleError: If k < 0.
    """
    scaled = vmcvar(scale_scenarios(scenarios, k), level).values
    violations = tuple(
        Violation(seed, {"p": level.p, "k": k, "expected": [k * value for value in vector], "vmcvar": _listed(scaled)})
        for vector in vmcvar(scenarios, level).values
        if not contains(scaled, [k * value for value in vector], config.law_tol)
    )
    return LawReport(law=Law.HOMOGENEOUS, instances_tested=1, violations=violations)


def check_translation(scenarios: ScenarioSet,
                      level: ConfidenceLevel,
                      k: Sequence[float],
                      seed: Seed = None) -> LawReport:
    """
    Every v + k with v in VMCVaR(X) belongs to VMCVaR(X + k).

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param k: Shift vector.
    :param seed: Provenance recorded on violations.
    :return: Report over one instance.
    :raises DimensionMismatchError: If k has the wrong length.
    """
    shifted = vmcvar(translate_scenarios(scenarios, k), level).values
    shift = np.asarray(k, dtype=float)
    violations = []
    for vector in vmcvar(scenarios, level).values:
        expected = list(np.asarray(vector) + shift)
        if not contains(shifted, expected, config.law_tol):
            violations.append(Violation(seed, {
                "p": level.p, "k": _listed([shift])[0], "expected": _listed([expected])[0], "vmcvar": _listed(shifted),
            }))
    return LawReport(law=Law.TRANSLATION, instances_tested=1, violations=tuple(violations))


def check_monotone(low: ScenarioSet, high: ScenarioSet, level: ConfidenceLevel, seed: Seed = None) -> LawReport:
    """
    Monotonicity of VMCVaR for X <= Y scenario by scenario.

    The checked statement is that every element of VMCVaR(Y) lies above some element of
    VMCVaR(X). The forward claim, every element of VMCVaR(X) lying below some element of
    VMCVaR(Y), is evaluated too and its failures are recorded as counterexamples.

    :param low: Distribution of X.
    :param high: Distribution of Y on the same probability space.
    :param level: Confidence level.
    :param seed: Provenance recorded on failures.
    :return: Report over one instance.
    :raises SpaceMismatchError: If the sets differ in space or X <= Y fails somewhere.
    """
    sum_scenarios(low, high)
    if np.any(low.outcomes > high.outcomes):
        raise SpaceMismatchError("Lower scenario set exceeds the upper one in some scenario")

    tol = config.law_tol
    low_values = vmcvar(low, level).values
    high_values = vmcvar(high, level).values
    details = {"p": level.p, "vmcvar_low": _listed(low_values), "vmcvar_high": _listed(high_values)}

    violations = tuple(
        Violation(seed, {**details, "unbounded": list(upper)})
        for upper in high_values
        if not any(weakly_below(lower, upper, tol) for lower in low_values)
    )
    counterexamples = tuple(
        Violation(seed, {**details, "uncovered": list(lower)})
        for lower in low_values
        if not any(weakly_below(lower, upper, tol) for upper in high_values)
    )
    return LawReport(law=Law.MONOTONE, instances_tested=1, violations=violations, counterexamples=counterexamples)


def _subadditivity_pair(x: ScenarioSet,
                        y: ScenarioSet,
                        level: ConfidenceLevel,
                        golden: Dict[str, List[Vector]],
                        name: str) -> Tuple[List[Violation], List[str]]:
    joint = sum_scenarios(x, y)
    values = {
        "vmcvar_x": vmcvar(x, level).values,
        "vmcvar_y": vmcvar(y, level).values,
        "vmcvar_sum": vmcvar(joint, level).values,
    }
    if "mvar_sum" in golden:
        values["mvar_sum"] = enumerate_mvar(joint, level).etas

    tol = config.law_tol
    regressions = [
        f"{name}.{key}: expected {_listed(expected)}, got {_listed(values[key])}"
        for key, expected in golden.items()
        if not _same_set(values[key], expected, tol)
    ]

    violations = []
    for vx in values["vmcvar_x"]:
        for vy in values["vmcvar_y"]:
            bound = list(np.asarray(vx) + np.asarray(vy))
            for vxy in values["vmcvar_sum"]:
                if not weakly_below(vxy, bound, tol):
                    violations.append(Violation(None, {
                        "instance": name, "p": level.p, "sum_of_risks": bound, "risk_of_sum": list(vxy),
                    }))
    return violations, regressions


def check_subadditivity_counterexample() -> LawReport:
    """
    Reproduce a failure of subadditivity of VMCVaR.

    Two fixed pairs are evaluated at p = 0.6 and p = 0.5 respectively; their values are
    compared to stored references and every triple with VMCVaR(X + Y) not below
    VMCVaR(X) + VMCVaR(Y) is recorded. The check passes when such a triple exists and
    every reference value reproduces.

    :return: Report over both pairs.
    """
    paired = _subadditivity_pair(
        ScenarioSet(outcomes=np.array(PAIRED_X, dtype=float), probs=np.full(5, 0.2)),
        ScenarioSet(outcomes=np.array(PAIRED_Y, dtype=float), probs=np.full(5, 0.2)),
        ConfidenceLevel(0.6),
        PAIRED_GOLDEN,
        "paired",
    )
    split = _subadditivity_pair(
        ScenarioSet(outcomes=np.array(SPLIT_X, dtype=float), probs=np.array(SPLIT_PROBS)),
        ScenarioSet(outcomes=np.array(SPLIT_Y, dtype=float), probs=np.array(SPLIT_PROBS)),
        ConfidenceLevel(0.5),
        SPLIT_GOLDEN,
        "split",
    )
    return LawReport(
        law=Law.SUBADDITIVITY_VIOLATION,
        instances_tested=2,
        violations=tuple(paired[0] + split[0]),
        expect_violation=True,
        regressions=tuple(paired[1] + split[1]),
    )


def check_marginal_bound(scenarios: ScenarioSet, level: ConfidenceLevel, seed: Seed = None) -> LawReport:
    """
    Every per-anchor risk vector lies above the vector of marginal CVaRs.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param seed: Provenance recorded on violations.
    :return: Report over one instance.
    """
    bound = marginal_cvar(scenarios, level).value
    violations = []
    for point in enumerate_mvar(scenarios, level):
        value = mcvar_at(scenarios, point.eta, level).value
        if not weakly_below(bound, value, config.law_tol):
            violations.append(Violation(seed, {
                "p": level.p, "anchor": list(point.eta), "mcvar": list(value), "marginal_cvar": list(bound),
            }))
    return LawReport(law=Law.MARGINAL_BOUND, instances_tested=1, violations=tuple(violations))


def check_ordering_instance(scenarios: ScenarioSet, level: ConfidenceLevel, seed: Seed = None) -> Optional[LawReport]:
    """
    Compare VMCVaR-bar, VMCVaR and the lower-orthant CTE on one instance.

    The instance qualifies when it has a single efficient point eta with P(X <= eta) = p,
    no outcome equal to eta, and all three measures defined. VMCVaR-bar <= VMCVaR is
    checked as a law; failures of VMCVaR <= CTE are recorded as counterexamples.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param seed: Provenance recorded on failures.
    :return: Report over one instance, or None if the instance does not qualify.
    """
    mvar = enumerate_mvar(scenarios, level)
    if len(mvar) != 1:
        return None
    anchor = mvar.points[0]
    if abs(anchor.cdf - level.p) > level.eps:
        return None
    if np.any(np.all(scenarios.outcomes == np.asarray(anchor.eta), axis=1)):
        return None

    bar = vmcvar_bar(scenarios, level, mvar=mvar)
    cte = cte_lower(scenarios, level)
    if not bar.defined or not cte.defined:
        return None
    value = vmcvar(scenarios, level, mvar).values[0]

    tol = config.law_tol
    details = {"p": level.p, "eta": list(anchor.eta), "vmcvar_bar": list(bar.value),
               "vmcvar": list(value), "cte": list(cte.value)}
    violations = () if weakly_below(bar.value, value, tol) else (Violation(seed, details),)
    counterexamples = () if weakly_below(value, cte.value, tol) else (Violation(seed, details),)
    return LawReport(law=Law.ORDERING, instances_tested=1, violations=violations, counterexamples=counterexamples)


def random_instance(rng: np.random.Generator, dims: Sequence[int] = (1, 2, 3)) -> Tuple[ScenarioSet, ConfidenceLevel]:
    """
    Equal-probability instance with integer outcomes in [0, 9] and a level k/n.

    :param rng: Random generator.
    :param dims: Candidate numbers of criteria.
    :return: Scenario set and level.
    """
    n = int(rng.integers(4, 9))
    dim = int(rng.choice(dims))
    outcomes = rng.integers(0, 10, size=(n, dim)).astype(float)
    k = int(rng.integers(1, n))
    return ScenarioSet(outcomes=outcomes, probs=np.full(n, 1.0 / n)), ConfidenceLevel(k / n)


def planted_instance(rng: np.random.Generator) -> Tuple[ScenarioSet, ConfidenceLevel]:
    """
    Instance with a body of k points below eta = max(body) and a tail strictly outside it.

    Every tail point is eta plus nonnegative integer noise that is nonzero somewhere, so
    eta is the only efficient point at p = k/n and P(X <= eta) = p.

    :param rng: Random generator.
    :return: Scenario set and level.
    """
    n = int(rng.integers(4, 9))
    dim = int(rng.integers(2, 4))
    k = int(rng.integers(2, n))
    body = rng.integers(0, 6, size=(k, dim))
    eta = body.max(axis=0)
    noise = rng.integers(0, 4, size=(n - k, dim))
    for row in np.flatnonzero(~noise.any(axis=1)):
        noise[row, rng.integers(0, dim)] = int(rng.integers(1, 4))
    outcomes = np.vstack([body, eta + noise]).astype(float)
    return ScenarioSet(outcomes=outcomes, probs=np.full(n, 1.0 / n)), ConfidenceLevel(k / n)


def check_ordering(seed: int, trials: int) -> LawReport:
    """
    Run the ordering comparison on seeded random instances.

    Even trials draw uniform instances, odd trials planted ones. Only qualifying instances
    are counted in ``instances_tested``.

    :param seed: Base seed.
    :param trials: Number of instances to draw.
    :return: Merged report.
    """
    report = LawReport(law=Law.ORDERING)
    for trial in range(trials):
        rng = np.random.default_rng((seed, trial))
        scenarios, level = planted_instance(rng) if trial % 2 else random_instance(rng, dims=(2, 3))
        instance = check_ordering_instance(scenarios, level, seed=(seed, trial))
        if instance is not None:
            report = report.merge(instance)
    logger.debug(f"Ordering: {report.instances_tested} of {trials} instances qualified")
    return report


def _normalized_trial(rng: np.random.Generator, seed: Seed) -> LawReport:
    level = ConfidenceLevel(float(rng.uniform(0.01, 0.99)))
    return check_normalized(level, dim=int(rng.integers(1, 6)), seed=seed)


def _homogeneous_trial(rng: np.random.Generator, seed: Seed) -> LawReport:
    scenarios, level = random_instance(rng)
    return check_homogeneous(scenarios, level, float(rng.uniform(0.0, 4.0)), seed=seed)


def _translation_trial(rng: np.random.Generator, seed: Seed) -> LawReport:
    scenarios, level = random_instance(rng)
    return check_translation(scenarios, level, rng.integers(-5, 6, size=scenarios.dim).astype(float), seed=seed)


def _monotone_trial(rng: np.random.Generator, seed: Seed) -> LawReport:
    low, level = random_instance(rng)
    noise = rng.integers(0, 3, size=low.outcomes.shape)
    return check_monotone(low, low.with_outcomes(low.outcomes + noise), level, seed=seed)


def _marginal_trial(rng: np.random.Generator, seed: Seed) -> LawReport:
    scenarios, level = random_instance(rng)
    return check_marginal_bound(scenarios, level, seed=seed)


RANDOM_TRIALS: Dict[Law, Callable[[np.random.Generator, Seed], LawReport]] = {
    Law.NORMALIZED: _normalized_trial,
    Law.HOMOGENEOUS: _homogeneous_trial,
    Law.TRANSLATION: _translation_trial,
    Law.MONOTONE: _monotone_trial,
    Law.MARGINAL_BOUND: _marginal_trial,
}


def check_random(law: Law, seed: int, trials: int) -> LawReport:
    """
    Check one per-instance law on seeded random instances.

    :param law: Law with a random-instance checker.
    :param seed: Base seed.
    :param trials: Number of instances.
    :return: Merged report.
    """
    trial_check = RANDOM_TRIALS[law]
    report = LawReport(law=law)
    for trial in range(trials):
        report = report.merge(trial_check(np.random.default_rng((seed, trial)), (seed, trial)))
    return report


def run_laws(seed: int, trials: int, law: Optional[Law] = None) -> List[LawReport]:
    """
    Check every law, or a single one.

    :param seed: Base seed of the random instances.
    :param trials: Number of random instances per law.
    :param law: Law to check, all laws if None.
    :return: One report per law, in declaration order.
    """
    reports = []
    for current in Law:
        if law is not None and current != law:
            continue
        if current == Law.SUBADDITIVITY_VIOLATION:
            report = check_subadditivity_counterexample()
        elif current == Law.ORDERING:
            report = check_ordering(seed, trials)
        else:
            report = check_random(current, seed, trials)

        if report.holds:
            logger.info(f"{current.value}: holds on {report.instances_tested} instances")
        else:
            logger.warning(
                f"{current.value}: {len(report.violations)} violations, {len(report.regressions)} regressions"
            )
        reports.append(report)
    return reports
