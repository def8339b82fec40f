"""
Export of the scalarized CVaR mixed-integer program in CPLEX LP format.
"""
import tempfile
from pathlib import Path

import numpy as np
import pulp
from loguru import logger

from mvrisk.core.errors import DimensionMismatchError
from mvrisk.core.models import ConfidenceLevel, ScalarizationWeights, ScenarioSet


def big_m(scenarios: ScenarioSet) -> np.ndarray:
    """
    Big-M constants M[s, i] = x^s_i - min over s' of x^{s'}_i, clamped at 0.

    Every efficient point lies inside the bounding box of the outcomes, so M[s, i]
    deactivates the coverage row of scenario s whenever its indicator is 1.
    """
    return np.maximum(scenarios.outcomes - scenarios.outcomes.min(axis=0), 0.0)


def build_mip(scenarios: ScenarioSet, level: ConfidenceLevel, weights: ScalarizationWeights) -> pulp.LpProblem:
    """
    Build the weighted-sum scalarization of the chance-constrained CVaR program.

    minimize   c . (eta + 1/(1-p) * sum_s q_s w^s)
    subject to w^s_i + eta_i >= x^s_i, w^s >= 0,
               sum_s q_s beta_s <= 1 - p,
               eta_i + M_is beta_s >= x^s_i, beta_s binary.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param weights: Scalarization weights; zero weights drop their objective terms.
    :return: PuLP problem.
    :raises DimensionMismatchError: If the weights do not match the criteria.
    """
    if weights.dim != scenarios.dim:
        raise DimensionMismatchError(f"Expected {scenarios.dim} weights, got {weights.dim}")

    n, dim = scenarios.n, scenarios.dim
    criteria = range(1, dim + 1)
    rows = range(1, n + 1)
    x = scenarios.outcomes.tolist()
    q = scenarios.probs.tolist()
    m = big_m(scenarios).tolist()

    problem = pulp.LpProblem("scalarized_mcvar", pulp.LpMinimize)
    eta = {i: pulp.LpVariable(f"eta_{i}", lowBound=None) for i in criteria}
    w = {(s, i): pulp.LpVariable(f"w_{s}_{i}", lowBound=0) for s in rows for i in criteria}
    beta = {s: pulp.LpVariable(f"beta_{s}", cat=pulp.LpBinary) for s in rows}

    scale = 1.0 / level.tail
    problem += pulp.lpSum(
        [weights.c[i - 1] * eta[i] for i in criteria if weights.c[i - 1]]
        + [weights.c[i - 1] * q[s - 1] * scale * w[s, i] for s in rows for i in criteria if weights.c[i - 1]]
    ), "objective"

    for s in rows:
        for i in criteria:
            problem += w[s, i] + eta[i] >= x[s - 1][i - 1], f"exceed_{s}_{i}"
    problem += pulp.lpSum(q[s - 1] * beta[s] for s in rows) <= level.tail, "knapsack"
    for s in rows:
        for i in criteria:
            coverage = eta[i] + m[s - 1][i - 1] * beta[s] if m[s - 1][i - 1] else eta[i]
            problem += coverage >= x[s - 1][i - 1], f"bigM_{s}_{i}"
    return problem


def export_mip(scenarios: ScenarioSet, level: ConfidenceLevel, weights: ScalarizationWeights) -> str:
    """
    Render the scalarized mixed-integer program as CPLEX LP text.

    :param scenarios: Distribution of X.
    :param level: Confidence level.
    :param weights: Scalarization weights.
    :return: LP document.
    """
    problem = build_mip(scenarios, level, weights)
    with tempfile.TemporaryDirectory() as folder:
        path = Path(folder) / "mcvar.lp"
        problem.writeLP(str(path))
        text = path.read_text(encoding="utf-8")
    logger.debug(
        f"Exported MIP with {len(problem.variables())} variables and {len(problem.constraints)} constraints"
    )
    return text
