"""
JSON 报告
把各流水线的结果转换为可序列化、字节级确定的字典；有理数一律写成 "a/b" 字符串
"""
import json
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import jsonschema

from core import TOOL_NAME, __version__
from core.classify import ClassificationResult
from core.exactpoly import BinaryForm, format_fraction
from core.fibration import JReport, TrivialityVerdict
from core.moduli import OracleVerdict
from core.numkernel import ComplexApprox, RootSet
from core.pencil import PencilLine, SpecialLine, TangentReport, TLocus
from core.singular import SingularPoint
from core.weierstrass import AutomorphismReport, ModuliVerdict, WeierstrassData, expand_normal_form
from utils.common import PathUtils

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12


def number(value: float) -> Any:
    """浮点数保留 12 位有效数字；非有限值写成字符串"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}") + 0.0


def scalar(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return format_fraction(Fraction(value))
    if isinstance(value, ComplexApprox):
        value = value.value
    if isinstance(value, complex):
        return {"re": number(value.real), "im": number(value.imag)}
    return number(value)


def vector(values: Sequence[Any]) -> List[Any]:
    return [scalar(v) for v in values]


def matrix(rows: Sequence[Sequence[Any]]) -> List[List[Any]]:
    return [vector(row) for row in rows]


def root_set(roots: RootSet) -> Dict[str, Any]:
    return {
        "roots": [scalar(r) for r in roots.roots],
        "multiplicities": list(roots.multiplicity_hint),
    }


def line_json(line: PencilLine) -> str:
    return line.label()


def weierstrass_json(w: WeierstrassData) -> Dict[str, Any]:
    change = w.coord_change
    return {
        "d": w.d,
        "m": w.m,
        "curve": w.curve().to_text(),
        "F": {str(h): form.to_text() for h, form in sorted(w.F.items())},
        "nonzero": w.nonzero(),
        "stripped": [{"line": form.to_text(), "multiplicity": mult} for form, mult in w.stripped],
        "reduced": w.reduced,
        "coordinate_change": {
            "matrix": matrix(change.matrix),
            "inverse": matrix(change.inverse),
            "scaling": change.scaling.to_text("y"),
            "shift": change.shift.to_text("y"),
            "denominator": change.denominator,
        },
    }


def _form_text(form: Optional[BinaryForm]) -> Optional[str]:
    return form.to_text() if form is not None else None


def verdict_json(verdict: ModuliVerdict) -> Dict[str, Any]:
    if not verdict.constant:
        return {"constant": False, "witness": list(verdict.witness)}
    out: Dict[str, Any] = {
        "constant": True,
        "k": verdict.k,
        "d": verdict.d,
        "m": verdict.m,
        "has_x_factor": verdict.has_x_factor,
        "representable": verdict.representable,
        "H": _form_text(verdict.H),
        "lambdas": {str(t): format_fraction(v) for t, v in sorted(verdict.lambdas.items())},
        "companion": verdict.companion.to_text("u") if verdict.companion is not None else None,
        "patterns": {str(h): list(p) for h, p in sorted(verdict.patterns.items())},
        "reason": verdict.reason,
    }
    out["normal_form"] = expand_normal_form(verdict).to_text() if verdict.representable else None
    return out


def automorphism_json(report: AutomorphismReport) -> Dict[str, Any]:
    return {
        "group": f"Z/{report.cyclic_order} x Z/{report.second_order}",
        "cyclic_order": report.cyclic_order,
        "cyclic_verified": report.cyclic_verified,
        "second_order": report.second_order,
        "second_verified": report.second_verified,
    }


def oracle_json(oracle: OracleVerdict) -> Dict[str, Any]:
    return {
        "constant": oracle.constant,
        "samples_used": oracle.samples_used,
        "worst_deviation": number(oracle.worst_deviation),
        "threshold": number(oracle.threshold),
        "witness": [line_json(line) for line in oracle.witness] if oracle.witness else None,
        "lines": [line_json(line) for line in oracle.lines],
    }


def special_line_json(special: SpecialLine) -> Dict[str, Any]:
    return {
        "line": line_json(special.line),
        "count": special.count,
        "exact": special.exact,
        "degree_drop": special.degree_drop,
        "point": vector(special.point) if special.point is not None else None,
        "contact": special.contact,
    }


def tangent_json(report: TangentReport) -> Dict[str, Any]:
    return {
        "line": line_json(report.line),
        "points": root_set(report.points),
        "tangent_lines": [vector(t) for t in report.tangent_lines],
        "t_point": vector(report.t_point),
        "max_deviation": number(report.max_deviation),
        "concurrent": report.concurrent,
        "threshold": number(report.threshold),
    }


def t_locus_json(locus: TLocus) -> Dict[str, Any]:
    return {
        "kind": locus.kind.value,
        "max_x": number(locus.max_x),
        "spread": number(locus.spread),
        "fit_tolerance": number(locus.fit_tolerance),
        "t_points": [vector(p) for p in locus.t_points],
        "lines": [line_json(r.line) for r in locus.reports],
        "skipped": locus.skipped,
        "special_points": [
            {
                "line": line_json(check.line),
                "point": vector(check.point),
                "deviation": number(check.deviation),
                "on_locus": check.on_locus,
            }
            for check in locus.special_points
        ],
        "special_on_locus": locus.special_on_locus,
    }


def singular_json(point: SingularPoint) -> Dict[str, Any]:
    return {
        "point": point.label(),
        "location": vector(point.location),
        "exact": point.exact,
        "multiplicity": point.multiplicity,
        "tangent_cone": [{"line": text, "multiplicity": mult} for text, mult in point.cone],
        "type": point.type_hint.value,
    }


def classification_json(result: ClassificationResult) -> Dict[str, Any]:
    return {
        "case_id": result.case_id.value,
        "description": result.description,
        "evidence": result.evidence,
    }


def j_report_json(report: JReport) -> Dict[str, Any]:
    return {
        "constant": report.constant,
        "value": format_fraction(report.value) if report.value is not None else None,
        "samples": [{"t": format_fraction(t), "j": number(j)} for t, j in report.samples],
        "numeric_agrees": report.numeric_agrees,
        "notes": list(report.notes),
    }


def triviality_json(verdict: TrivialityVerdict) -> Dict[str, Any]:
    return {
        "isotrivial": verdict.isotrivial,
        "family": verdict.family.to_text(),
        "genus": verdict.family.genus,
        "normalized": weierstrass_json(verdict.pair),
        "verdict": verdict_json(verdict.via_pair),
        "j_invariant": j_report_json(verdict.j_report) if verdict.j_report is not None else None,
        "notes": list(verdict.notes),
    }


def build_report(
    command: str,
    inputs: Dict[str, Any],
    result: Dict[str, Any],
    seed: int,
    tolerance: float,
    timings: Optional[Dict[str, float]] = None,
) -> Dict[str, Any]:
    report: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "tool": TOOL_NAME,
        "version": __version__,
        "input": inputs,
        "seed": seed,
        "tolerance": number(tolerance),
        "result": result,
    }
    if timings is not None:
        report["timings"] = {name: number(seconds) for name, seconds in timings.items()}
    return report


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2)


def load_schema() -> Dict[str, Any]:
    with open(PathUtils.get_schema_path(), "r", encoding="utf-8") as f:
        return json.load(f)


def validate(report: Dict[str, Any]) -> None:
    """按随仓库发布的 schema 校验报告，失败时抛出 jsonschema.ValidationError"""
    jsonschema.validate(instance=report, schema=load_schema())
    logger.debug(f"报告通过 schema 校验: {report['command']}")
