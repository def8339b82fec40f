import re

import pulp
import pytest

from mvrisk.core.errors import DimensionMismatchError
from mvrisk.core.models import ConfidenceLevel, ScalarizationWeights
from mvrisk.services.mip import big_m, build_mip, export_mip

P6 = ConfidenceLevel(0.6)
HALF = ScalarizationWeights((0.5, 0.5))


def _coefficients(expression) -> dict:
    return {variable.name: coefficient for variable, coefficient in expression.items()}


def test_big_m(example_y):
    assert big_m(example_y).tolist() == [[3, 0.5], [0, 2], [1, 4], [1, 2], [2, 0]]


def test_variables(example_y):
    problem = build_mip(example_y, P6, HALF)
    variables = {variable.name: variable for variable in problem.variables()}
    binaries = [name for name, variable in variables.items() if variable.cat == pulp.LpInteger]
    assert sorted(binaries) == [f"beta_{s}" for s in range(1, 6)]
    assert all(variables[f"beta_{s}"].upBound == 1 for s in range(1, 6))
    assert sum(name.startswith("w_") for name in variables) == 10
    assert all(variables[f"w_{s}_{i}"].lowBound == 0 for s in range(1, 6) for i in (1, 2))
    assert variables["eta_1"].lowBound is None and variables["eta_2"].lowBound is None


def test_constraints(example_y):
    constraints = build_mip(example_y, P6, HALF).constraints
    assert sum(name.startswith("exceed_") for name in constraints) == 10
    assert sum(name.startswith("bigM_") for name in constraints) == 10

    knapsack = constraints["knapsack"]
    assert knapsack.sense == pulp.LpConstraintLE
    assert _coefficients(knapsack) == pytest.approx({f"beta_{s}": 0.2 for s in range(1, 6)})
    assert -knapsack.constant == pytest.approx(0.4)

    exceed = constraints["exceed_1_2"]
    assert exceed.sense == pulp.LpConstraintGE
    assert _coefficients(exceed) == {"w_1_2": 1, "eta_2": 1}
    assert -exceed.constant == pytest.approx(1.5)


def test_big_m_rows(example_y):
    constraints = build_mip(example_y, P6, HALF).constraints
    assert _coefficients(constraints["bigM_3_2"]) == {"eta_2": 1, "beta_3": 4}
    assert -constraints["bigM_3_2"].constant == pytest.approx(5.0)
    # scenario 2 attains the minimum of the first criterion
    assert _coefficients(constraints["bigM_2_1"]) == {"eta_1": 1}


def test_objective(example_y):
    objective = _coefficients(build_mip(example_y, P6, HALF).objective)
    assert objective["eta_1"] == objective["eta_2"] == 0.5
    assert all(objective[f"w_{s}_{i}"] == pytest.approx(0.25) for s in range(1, 6) for i in (1, 2))


def test_zero_weight_drops_objective_terms(example_y):
    objective = _coefficients(build_mip(example_y, P6, ScalarizationWeights((1.0, 0.0))).objective)
    assert set(objective) == {"eta_1"} | {f"w_{s}_1" for s in range(1, 6)}


def test_single_scenario(make_scenarios):
    problem = build_mip(make_scenarios([(2, 3)]), ConfidenceLevel(0.5), HALF)
    knapsack = problem.constraints["knapsack"]
    assert _coefficients(knapsack) == {"beta_1": 1.0}
    assert -knapsack.constant == pytest.approx(0.5)


def test_weights_must_match(example_y):
    with pytest.raises(DimensionMismatchError):
        build_mip(example_y, P6, ScalarizationWeights((1.0,)))


def test_export_sections(example_y):
    text = export_mip(example_y, P6, HALF)
    assert text.startswith("\\* scalarized_mcvar *\\")
    for section in ("Minimize", "objective:", "Subject To", "knapsack:", "Bounds", "Binaries", "End"):
        assert section in text
    assert "eta_1 free" in text
    binaries = text.split("Binaries")[1].split("End")[0].split()
    assert binaries == [f"beta_{s}" for s in range(1, 6)]


def test_export_is_deterministic(example_y):
    assert export_mip(example_y, P6, HALF) == export_mip(example_y, P6, HALF)


def _section(text: str, start: str, end: str) -> str:
    return " ".join(text.split(start, 1)[1].split(end, 1)[0].split())


def _rows(text: str) -> dict:
    body = _section(text, "Subject To", "Bounds")
    return dict(re.findall(r"(\w+): (.*?)(?= \w+: |$)", body))


def test_export_text_audit(example_y):
    text = export_mip(example_y, P6, HALF)
    rows = _rows(text)
    assert sum(name.startswith("bigM_") for name in rows) == 10
    assert sum(name.startswith("exceed_") for name in rows) == 10
    assert re.findall(r"0\.2 beta_\d", rows["knapsack"]) == [f"0.2 beta_{s}" for s in range(1, 6)]
    assert rows["knapsack"].endswith("<= 0.4")
    assert rows["bigM_3_2"].split(" >= ")[1] == "5"
    assert re.findall(r"(\w+) free", _section(text, "Bounds", "Binaries")) == ["eta_1", "eta_2"]
    assert len(set(re.findall(r"\bw_\d+_\d+\b", text))) == 10
    assert len(_section(text, "Binaries", "End").split()) == 5
