"""
Machine-readable documents for the command line.

JSON keys are emitted in a fixed order and floats in their shortest round-tripping form;
UNDEFINED values are written as the string ``"undefined"``.
"""
import csv
import io
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from mvrisk.core.models import (
    UNDEFINED,
    LawReport,
    MaybeScalar,
    MeasureReport,
    MVaRSet,
    RiskVector,
    Undefined,
    Vector,
    VMCVaRSet,
    Violation,
)

UNDEFINED_TEXT = "undefined"

VectorRow = Tuple[str, Union[Vector, Undefined]]


def _vector(value: Sequence[float]) -> List[float]:
    return [float(component) for component in value]


def _maybe_vector(vector: RiskVector) -> Union[List[float], str]:
    return _vector(vector.value) if vector.defined else UNDEFINED_TEXT


def _maybe_scalar(value: MaybeScalar) -> Union[float, str]:
    return UNDEFINED_TEXT if value is UNDEFINED else float(value)


def mvar_document(mvar: MVaRSet) -> Dict[str, Any]:
    """Document with the level, the efficient points and their CDF values."""
    return {
        "level": mvar.level.p,
        "plep": [_vector(point.eta) for point in mvar],
        "cdf": [point.cdf for point in mvar],
    }


def vmcvar_document(risk_set: VMCVaRSet) -> Dict[str, Any]:
    """Document with the level and each risk vector with its anchor."""
    return {
        "level": risk_set.level.p,
        "vmcvar": [
            {"value": _vector(vector.value), "anchor": _vector(vector.anchor.eta)}
            for vector in risk_set
        ],
    }


def report_document(report: MeasureReport) -> Dict[str, Any]:
    """
    Document with every measure of a report.

    Keys: level, mvar, vmcvar, vmcvar_bar, cte, marginal_cvar, then mcvar_bar_scalar,
    weights and scalarized when weights were given, then flags when any measure is flagged.
    """
    document: Dict[str, Any] = {
        "level": report.level.p,
        "mvar": [_vector(eta) for eta in report.mvar.etas],
        "vmcvar": vmcvar_document(report.vmcvar)["vmcvar"],
        "vmcvar_bar": _maybe_vector(report.vmcvar_bar),
        "cte": _maybe_vector(report.cte),
        "marginal_cvar": _vector(report.marginal_cvar.value),
    }
    if report.weights is not None and report.scalarized is not None:
        document["mcvar_bar_scalar"] = _maybe_scalar(report.mcvar_bar_scalar)
        document["weights"] = _vector(report.weights.c)
        document["scalarized"] = {
            "vmcvar": [float(value) for value in report.scalarized.vmcvar],
            "vmcvar_bar": _maybe_scalar(report.scalarized.vmcvar_bar),
            "cte": _maybe_scalar(report.scalarized.cte),
            "marginal_cvar": float(report.scalarized.marginal_cvar),
        }

    flags = {
        name: sorted(vector.flags)
        for name, vector in (("vmcvar_bar", report.vmcvar_bar), ("cte", report.cte))
        if vector.flags
    }
    if flags:
        document["flags"] = flags
    return document


def _violation(violation: Violation) -> Dict[str, Any]:
    return {
        "seed": list(violation.seed) if violation.seed is not None else None,
        "values": violation.values,
    }


def law_document(reports: Iterable[LawReport]) -> List[Dict[str, Any]]:
    """Array with one entry per law report."""
    return [
        {
            "law": report.law.value,
            "holds": report.holds,
            "instances_tested": report.instances_tested,
            "expect_violation": report.expect_violation,
            "violations": [_violation(violation) for violation in report.violations],
            "counterexamples": [_violation(violation) for violation in report.counterexamples],
            "regressions": list(report.regressions),
        }
        for report in reports
    ]


def render_json(document: Any) -> str:
    """Serialize a document with two-space indentation and a trailing newline."""
    return json.dumps(document, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def mvar_rows(mvar: MVaRSet) -> List[VectorRow]:
    """CSV rows of the efficient points."""
    return [("mvar", point.eta) for point in mvar]


def vmcvar_rows(risk_set: VMCVaRSet) -> List[VectorRow]:
    """CSV rows of the risk vectors."""
    return [("vmcvar", value) for value in risk_set.values]


def report_rows(report: MeasureReport) -> List[VectorRow]:
    """CSV rows of every vector measure of a report."""
    return (
        mvar_rows(report.mvar)
        + vmcvar_rows(report.vmcvar)
        + [
            ("vmcvar_bar", report.vmcvar_bar.value),
            ("cte", report.cte.value),
            ("marginal_cvar", report.marginal_cvar.value),
        ]
    )


def render_vector_csv(rows: List[VectorRow], dim: int) -> str:
    """
    Render vector rows with the header kind,x1,...,xd.

    :param rows: (kind, vector) pairs; UNDEFINED fills every column with ``undefined``.
    :param dim: Number of criteria.
    :return: CSV text.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["kind"] + [f"x{i}" for i in range(1, dim + 1)])
    for kind, value in rows:
        if value is UNDEFINED:
            writer.writerow([kind] + [UNDEFINED_TEXT] * dim)
        else:
            writer.writerow([kind] + [repr(float(component)) for component in value])
    return buffer.getvalue()


def render_law_csv(reports: Iterable[LawReport]) -> str:
    """
    Render a one-line summary per law.

    :param reports: Law reports.
    :return: CSV text with the header law,holds,instances_tested,violations,counterexamples,regressions.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["law", "holds", "instances_tested", "violations", "counterexamples", "regressions"])
    for report in reports:
        writer.writerow([
            report.law.value,
            str(report.holds).lower(),
            report.instances_tested,
            len(report.violations),
            len(report.counterexamples),
            len(report.regressions),
        ])
    return buffer.getvalue()


def first_failure(reports: Iterable[LawReport]) -> Optional[LawReport]:
    """First report that does not hold, if any."""
    return next((report for report in reports if not report.holds), None)
