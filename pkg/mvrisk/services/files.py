"""
Scenario file reading and writing.
"""
import csv
import json
import math
from pathlib import Path
from typing import IO, Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from mvrisk.core.errors import DimensionMismatchError, EmptyInputError, ParseError
from mvrisk.core.models import ScenarioSet

FORMATS = ("csv", "json")


def _number(text: Any, where: str) -> float:
    if isinstance(text, bool):
        raise ParseError(f"{where}: expected a number, got {text!r}")
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: expected a number, got {text!r}")
    if not math.isfinite(value):
        raise ParseError(f"{where}: value must be finite, got {text!r}")
    return value


def _read_header(header: List[str]) -> Tuple[int, bool]:
    names = [name.strip() for name in header]
    has_label = bool(names) and names[-1] == "label"
    criteria = names[1:-1] if has_label else names[1:]
    if not names or names[0] != "prob" or not criteria:
        raise ParseError(f"Header must read prob,x1,...,xd[,label], got {','.join(names)!r}")
    if criteria != [f"x{i}" for i in range(1, len(criteria) + 1)]:
        raise ParseError(f"Criterion columns must be x1..x{len(criteria)}, got {','.join(criteria)!r}")
    return len(criteria), has_label


def _load_csv(text: str) -> ScenarioSet:
    lines = [
        (number, line) for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise EmptyInputError("Scenario file is empty")

    rows = list(csv.reader(line for _, line in lines))
    dim, has_label = _read_header(rows[0])
    width = dim + 2 if has_label else dim + 1

    probs: List[float] = []
    outcomes: List[List[float]] = []
    labels: List[str] = []
    for (number, _), row in zip(lines[1:], rows[1:]):
        if len(row) != width:
            raise DimensionMismatchError(f"Line {number}: expected {width} fields, got {len(row)}")
        probs.append(_number(row[0].strip(), f"Line {number}"))
        outcomes.append([_number(cell.strip(), f"Line {number}") for cell in row[1:dim + 1]])
        if has_label:
            labels.append(row[-1].strip())

    if not probs:
        raise EmptyInputError("Scenario file has a header but no scenarios")
    return ScenarioSet(
        outcomes=np.array(outcomes, dtype=float),
        probs=np.array(probs, dtype=float),
        labels=tuple(labels) if has_label else None,
    )


def _load_json(text: str) -> ScenarioSet:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e}")
    if not isinstance(document, dict) or not isinstance(document.get("scenarios"), list):
        raise ParseError('Expected an object with a "scenarios" list')

    scenarios = document["scenarios"]
    if not scenarios:
        raise EmptyInputError("Scenario file has no scenarios")
    dim = document.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
        raise ParseError(f'"dim" must be a positive integer, got {dim!r}')

    probs: List[float] = []
    outcomes: List[List[float]] = []
    labels: List[Optional[str]] = []
    for index, scenario in enumerate(scenarios):
        where = f"Scenario {index}"
        if not isinstance(scenario, dict) or not isinstance(scenario.get("x"), list):
            raise ParseError(f'{where}: expected an object with "prob" and an "x" list')
        vector = [_number(value, where) for value in scenario["x"]]
        if len(vector) != (dim or len(vector)) or (outcomes and len(vector) != len(outcomes[0])):
            raise DimensionMismatchError(f"{where}: expected {dim or len(outcomes[0])} components, got {len(vector)}")
        probs.append(_number(scenario.get("prob"), where))
        outcomes.append(vector)
        label = scenario.get("label")
        labels.append(None if label is None else str(label))

    if any(label is None for label in labels) and any(label is not None for label in labels):
        raise ParseError("Either every scenario has a label or none has")
    return ScenarioSet(
        outcomes=np.array(outcomes, dtype=float),
        probs=np.array(probs, dtype=float),
        labels=None if labels[0] is None else tuple(str(label) for label in labels),
    )


def load_scenarios(source: IO[bytes], fmt: str) -> ScenarioSet:
    """
    Read and validate a scenario set.

    CSV files have a ``prob,x1,...,xd[,label]`` header and skip blank and ``#`` lines.
    JSON files hold ``{"dim": d, "scenarios": [{"prob": q, "x": [...], "label": "..."}]}``.

    :param source: Binary stream with UTF-8 text.
    :param fmt: ``csv`` or ``json``.
    :return: Validated scenario set.
    :raises ParseError: If the content is malformed.
    :raises DimensionMismatchError: If rows have different lengths.
    :raises InvalidProbabilityError: If probabilities are not positive or do not sum to 1.
    :raises EmptyInputError: If there are no scenarios.
    """
    if fmt not in FORMATS:
        raise ParseError(f"Unknown scenario format {fmt!r}")
    try:
        text = source.read().decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise ParseError(f"Scenario file is not UTF-8: {e}")

    scenarios = _load_csv(text) if fmt == "csv" else _load_json(text)
    logger.debug(f"Loaded {scenarios.n} scenarios with {scenarios.dim} criteria from {fmt}")
    return scenarios


def format_for(path: str) -> str:
    """Scenario format implied by a file name: json for .json, csv otherwise."""
    return "json" if Path(path).suffix.lower() == ".json" else "csv"


def read_scenarios(path: str) -> ScenarioSet:
    """
    Load a scenario file, choosing the format from its extension.

    :param path: File path.
    :return: Validated scenario set.
    :raises ParseError: If the file cannot be opened or parsed.
    """
    try:
        with open(path, "rb") as f:
            return load_scenarios(f, format_for(path))
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}")


def dump_scenarios(scenarios: ScenarioSet) -> str:
    """
    Canonical JSON form of a scenario set.

    Floats are written in their shortest round-tripping form, so loading the result
    reproduces the set exactly.

    :param scenarios: Scenario set.
    :return: JSON document with keys dim, scenarios and per scenario prob, x, label.
    """
    entries: List[Dict[str, Any]] = []
    for s in range(scenarios.n):
        entry: Dict[str, Any] = {
            "prob": float(scenarios.probs[s]),
            "x": [float(value) for value in scenarios.outcomes[s]],
        }
        if scenarios.labels is not None:
            entry["label"] = scenarios.labels[s]
        entries.append(entry)
    return json.dumps({"dim": scenarios.dim, "scenarios": entries}, indent=2, ensure_ascii=False) + "\n"
