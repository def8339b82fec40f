"""
Plot data for the desirable region of a bivariate distribution.
"""
import csv
import io
from dataclasses import dataclass
from typing import List

from mvrisk.core.errors import DimensionMismatchError
from mvrisk.core.models import ConfidenceLevel, ScenarioSet
from mvrisk.core.quantile import enumerate_mvar
from mvrisk.core.risk import classify_desirable


@dataclass(frozen=True)
class RegionRow:
    """
    One plotted point.

    :param kind: ``scenario``, ``plep`` or ``boundary``.
    :param x1: First coordinate.
    :param x2: Second coordinate.
    :param tag: desirable/undesirable for scenarios, 1-based index otherwise.
    """
    kind: str
    x1: float
    x2: float
    tag: str


def region_rows(scenarios: ScenarioSet, level: ConfidenceLevel) -> List[RegionRow]:
    """
    Scenario points, efficient points and the staircase boundary of the desirable region.

    The boundary starts at (min x1, eta^1_2), passes each efficient point and the inner
    corner (eta^j_1, eta^{j+1}_2) after it, and ends at (eta^k_1, min x2), with the
    efficient points ordered by their first coordinate.

    :param scenarios: Bivariate distribution.
    :param level: Confidence level.
    :return: Rows in the order scenarios, efficient points, boundary.
    :raises DimensionMismatchError: If the set is not bivariate.
    """
    if scenarios.dim != 2:
        raise DimensionMismatchError(f"Region data needs two criteria, got {scenarios.dim}")

    mvar = enumerate_mvar(scenarios, level)
    undesirable = set(classify_desirable(scenarios, mvar).undesirable)
    rows = [
        RegionRow("scenario", float(x1), float(x2), "undesirable" if s in undesirable else "desirable")
        for s, (x1, x2) in enumerate(scenarios.outcomes.tolist())
    ]

    etas = sorted(mvar.etas)
    rows += [RegionRow("plep", eta[0], eta[1], str(j)) for j, eta in enumerate(etas, start=1)]

    low1, low2 = (float(value) for value in scenarios.outcomes.min(axis=0))
    vertices = [(low1, etas[0][1])]
    for current, following in zip(etas, etas[1:]):
        vertices += [current, (current[0], following[1])]
    vertices += [etas[-1], (etas[-1][0], low2)]
    rows += [RegionRow("boundary", x1, x2, str(j)) for j, (x1, x2) in enumerate(vertices, start=1)]
    return rows


def render_region_csv(rows: List[RegionRow]) -> str:
    """
    Render region rows as CSV with the header kind,x1,x2,tag.

    :param rows: Rows from region_rows.
    :return: CSV text.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["kind", "x1", "x2", "tag"])
    for row in rows:
        writer.writerow([row.kind, repr(float(row.x1)), repr(float(row.x2)), row.tag])
    return buffer.getvalue()
