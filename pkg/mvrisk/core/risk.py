"""
Conditional risk measures of finite discrete random vectors.

The vector-valued multivariate CVaR attaches to each efficient point eta the vector
eta + E[(X - eta)_+] / (1 - p) and keeps the non-dominated ones. The comparators
(the scalar and vector expectations over undesirable outcomes and the lower-orthant
CTE) can condition on an empty event; they then return UNDEFINED instead of raising.
"""
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from mvrisk.core.errors import DimensionMismatchError, EmptyConditionError, MultiplePlepsError, NotUnivariateError
from mvrisk.core.models import (
    UNDEFINED,
    ConfidenceLevel,
    DesirabilityPartition,
    MaybeScalar,
    MeasureReport,
    MVaRSet,
    QuantilePoint,
    RiskVector,
    ScalarizationWeights,
    ScalarizedMeasures,
    ScenarioSet,
    VMCVaRSet,
)
from mvrisk.core.quantile import enumerate_mvar, pareto_min_indices, quantile_point
from mvrisk.utils.vectors import as_vector


def _var_cvar(values: np.ndarray, probs: np.ndarray, level: ConfidenceLevel) -> Tuple[float, float]:
    grid = np.unique(values)
    cdf = (values[None, :] <= grid[:, None]).astype(float) @ probs
    var = float(grid[np.flatnonzero(cdf >= level.p - level.eps)[0]])
    cvar = var + float(probs @ np.maximum(values - var, 0.0)) / level.tail
    return var, cvar


def univariate_cvar(scenarios: ScenarioSet, level: ConfidenceLevel) -> Tuple[float, float]:
    """
    VaR and CVaR of a univariate distribution.

    VaR is the smallest value whose CDF reaches p; CVaR evaluates
    eta + E[(V - eta)_+] / (1 - p) there, which is the optimum of the linear program
    over eta.

    :param scenarios: Distribution with a single criterion.
    :param level: Confidence level.
    :return: Tuple (var, cvar).
    :raises NotUnivariateError: If the set has more than one criterion.
    """
    if scenarios.dim != 1:
        raise NotUnivariateError(f"Expected one criterion, got {scenarios.dim}")
    return _var_cvar(scenarios.outcomes[:, 0], scenarios.probs, level)


def marginal_cvar(scenarios: ScenarioSet, level: ConfidenceLevel) -> RiskVector:
    """
    Per-criterion univariate CVaR, each criterion taken on its own.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :return: Vector of the marginal CVaRs.
    """
    values = tuple(
        _var_cvar(scenarios.outcomes[:, i], scenarios.probs, level)[1] for i in range(scenarios.dim)
    )
    return RiskVector(value=values, conditioning_mass=level.tail)


def _mcvar(scenarios: ScenarioSet, anchor: QuantilePoint, level: ConfidenceLevel) -> RiskVector:
    eta = np.asarray(anchor.eta)
    excess = np.maximum(scenarios.outcomes - eta, 0.0)
    value = eta + (scenarios.probs @ excess) / level.tail
    outside = np.ones(scenarios.n, dtype=bool)
    outside[list(anchor.covered)] = False
    return RiskVector(
        value=as_vector(value),
        anchor=anchor,
        conditioning_mass=float(scenarios.probs[outside].sum()),
    )


def mcvar_at(scenarios: ScenarioSet, eta: Sequence[float], level: ConfidenceLevel) -> RiskVector:
    """
    Conditional risk vector eta + E[(X - eta)_+] / (1 - p) for one anchor.

    The anchor need not be efficient; the division is always by 1 - p.

    :param scenarios: Distribution of X.
    :param eta: Anchor vector.
    :param level: Confidence level.
    :return: Risk vector anchored at eta; its mass is P(X not <= eta).
    :raises DimensionMismatchError: If eta has the wrong length.
    """
    return _mcvar(scenarios, quantile_point(scenarios, eta), level)


def mcvar_conditional(scenarios: ScenarioSet, eta: Sequence[float], level: ConfidenceLevel) -> RiskVector:
    """
    Conditional form E[max(X, eta) | X not <= eta].

    Agrees with mcvar_at when P(X <= eta) = p. Outside that hypothesis the value is
    still returned, flagged ``hypothesis_violated``.

    :param scenarios: Distribution of X.
    :param eta: Anchor vector.
    :param level: Confidence level.
    :return: Risk vector anchored at eta.
    :raises EmptyConditionError: If every outcome lies below eta.
    """
    anchor = quantile_point(scenarios, eta)
    outside = np.ones(scenarios.n, dtype=bool)
    outside[list(anchor.covered)] = False
    if not outside.any():
        raise EmptyConditionError(f"No outcome exceeds {anchor.eta}")

    probs = scenarios.probs[outside]
    mass = float(probs.sum())
    value = probs @ np.maximum(scenarios.outcomes[outside], np.asarray(anchor.eta)) / mass
    flags = frozenset() if abs(anchor.cdf - level.p) <= level.eps else frozenset({"hypothesis_violated"})
    return RiskVector(value=as_vector(value), anchor=anchor, conditioning_mass=mass, flags=flags)


def vmcvar(scenarios: ScenarioSet, level: ConfidenceLevel, mvar: Optional[MVaRSet] = None) -> VMCVaRSet:
    """
    Vector-valued multivariate CVaR: non-dominated risk vectors over all efficient points.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param mvar: Efficient points of the same set and level, enumerated if None.
    :return: Non-dominated vectors with their anchors.
    """
    mvar = mvar or enumerate_mvar(scenarios, level)
    candidates = [_mcvar(scenarios, point, level) for point in mvar]
    keep = pareto_min_indices([candidate.value for candidate in candidates])
    logger.debug(f"Kept {len(keep)} of {len(candidates)} conditional risk vectors")
    return VMCVaRSet(level=level, vectors=tuple(candidates[i] for i in keep))


def classify_desirable(scenarios: ScenarioSet, mvar: MVaRSet) -> DesirabilityPartition:
    """
    Split scenarios into those below some efficient point and the rest.

    :param scenarios: Distribution of X.
    :param mvar: Efficient points of the same set.
    :return: Desirable and undesirable scenario indices.
    """
    etas = np.asarray(mvar.etas, dtype=float)
    below = np.any(np.all(scenarios.outcomes[:, None, :] <= etas[None, :, :], axis=2), axis=1)
    return DesirabilityPartition(
        desirable=tuple(int(s) for s in np.flatnonzero(below)),
        undesirable=tuple(int(s) for s in np.flatnonzero(~below)),
    )


def mcvar_bar_scalar(scenarios: ScenarioSet,
                     level: ConfidenceLevel,
                     weights: ScalarizationWeights,
                     mvar: Optional[MVaRSet] = None) -> MaybeScalar:
    """
    Expected scalarized outcome c . X over the undesirable scenarios.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param weights: Scalarization weights.
    :param mvar: Efficient points of the same set and level, enumerated if None.
    :return: Conditional expectation, or UNDEFINED if every scenario is desirable.
    """
    if weights.dim != scenarios.dim:
        raise DimensionMismatchError(f"Expected {scenarios.dim} weights, got {weights.dim}")
    mvar = mvar or enumerate_mvar(scenarios, level)
    undesirable = list(classify_desirable(scenarios, mvar).undesirable)
    if not undesirable:
        return UNDEFINED

    probs = scenarios.probs[undesirable]
    scores = scenarios.outcomes[undesirable] @ np.asarray(weights.c)
    return float(probs @ scores / probs.sum())


def vmcvar_bar(scenarios: ScenarioSet,
               level: ConfidenceLevel,
               strict_exceedance: bool = False,
               relaxed: bool = False,
               mvar: Optional[MVaRSet] = None) -> RiskVector:
    """
    Expected outcome over the scenarios exceeding the efficient point in some criterion.

    The exceedance is X_i >= eta_i, or X_i > eta_i with strict_exceedance. With several
    efficient points the relaxed mode conditions on the undesirable scenarios, those
    below no efficient point, and flags the result ``relaxed``. The exceedance toggle
    does not apply there.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param strict_exceedance: Use > instead of >= in the exceedance test.
    :param relaxed: Accept several efficient points.
    :param mvar: Efficient points of the same set and level, enumerated if None.
    :return: Conditional expectation vector, or UNDEFINED on an empty event.
    :raises MultiplePlepsError: If there are several efficient points and relaxed is False.
    """
    mvar = mvar or enumerate_mvar(scenarios, level)
    if len(mvar) > 1 and not relaxed:
        raise MultiplePlepsError(f"Expected one efficient point, got {len(mvar)}")

    flags = set()
    if len(mvar) > 1:
        condition = np.zeros(scenarios.n, dtype=bool)
        condition[list(classify_desirable(scenarios, mvar).undesirable)] = True
        flags.add("relaxed")
    else:
        eta = np.asarray(mvar.etas[0], dtype=float)
        exceeds = scenarios.outcomes > eta if strict_exceedance else scenarios.outcomes >= eta
        condition = np.any(exceeds, axis=1)
        if strict_exceedance:
            flags.add("strict_exceedance")
    anchor = mvar.points[0] if len(mvar) == 1 else None

    if not condition.any():
        return RiskVector(value=UNDEFINED, anchor=anchor, flags=frozenset(flags))
    probs = scenarios.probs[condition]
    mass = float(probs.sum())
    return RiskVector(
        value=as_vector(probs @ scenarios.outcomes[condition] / mass),
        anchor=anchor,
        conditioning_mass=mass,
        flags=frozenset(flags),
    )


def cte_lower(scenarios: ScenarioSet, level: ConfidenceLevel) -> RiskVector:
    """
    Lower-orthant conditional tail expectation E[X | F(X) >= p].

    A scenario qualifies when the joint CDF at its own outcome reaches the level.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :return: Conditional expectation vector, or UNDEFINED if no scenario qualifies.
    """
    outcomes = scenarios.outcomes
    own_cdf = np.all(outcomes[None, :, :] <= outcomes[:, None, :], axis=2).astype(float) @ scenarios.probs
    qualifies = own_cdf >= level.p - level.eps
    if not qualifies.any():
        return RiskVector(value=UNDEFINED)

    probs = scenarios.probs[qualifies]
    mass = float(probs.sum())
    return RiskVector(value=as_vector(probs @ outcomes[qualifies] / mass), conditioning_mass=mass)


def scalarize(vector: RiskVector, weights: ScalarizationWeights) -> MaybeScalar:
    """
    Weighted sum of a risk vector, UNDEFINED carried through.

    :param vector: Risk vector.
    :param weights: Scalarization weights.
    :return: c . value, or UNDEFINED.
    """
    if not vector.defined:
        return UNDEFINED
    return weights.apply(vector.value)


def full_report(scenarios: ScenarioSet,
                level: ConfidenceLevel,
                weights: Optional[ScalarizationWeights] = None,
                strict_exceedance: bool = False,
                relaxed: bool = False) -> MeasureReport:
    """
    Evaluate every measure at one level.

    VMCVaR-bar is reported UNDEFINED and flagged ``multiple_pleps`` when there are
    several efficient points and the relaxed mode is off.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param weights: Weights for the scalar measures, omitted if None.
    :param strict_exceedance: Use > in the VMCVaR-bar exceedance test.
    :param relaxed: Condition VMCVaR-bar on exceeding every efficient point.
    :return: Report of all measures.
    """
    if weights is not None and weights.dim != scenarios.dim:
        raise DimensionMismatchError(f"Expected {scenarios.dim} weights, got {weights.dim}")

    mvar = enumerate_mvar(scenarios, level)
    risk_set = vmcvar(scenarios, level, mvar)
    try:
        bar = vmcvar_bar(scenarios, level, strict_exceedance, relaxed, mvar)
    except MultiplePlepsError:
        bar = RiskVector(value=UNDEFINED, flags=frozenset({"multiple_pleps"}))
    cte = cte_lower(scenarios, level)
    marginal = marginal_cvar(scenarios, level)

    scalar: Optional[MaybeScalar] = None
    scalarized: Optional[ScalarizedMeasures] = None
    if weights is not None:
        scalar = mcvar_bar_scalar(scenarios, level, weights, mvar)
        scalarized = ScalarizedMeasures(
            vmcvar=tuple(weights.apply(value) for value in risk_set.values),
            vmcvar_bar=scalarize(bar, weights),
            cte=scalarize(cte, weights),
            marginal_cvar=weights.apply(marginal.value),
        )

    logger.info(f"Report at p={level.p}: {len(mvar)} efficient points, {len(risk_set)} risk vectors")
    return MeasureReport(
        level=level,
        mvar=mvar,
        vmcvar=risk_set,
        vmcvar_bar=bar,
        cte=cte,
        marginal_cvar=marginal,
        mcvar_bar_scalar=scalar,
        weights=weights,
        scalarized=scalarized,
    )
