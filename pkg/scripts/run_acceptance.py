#!/usr/bin/env python3
"""
完整验收运行
按验收标准生成 250 正例 + 250 反例、100 次往返、100 个椭圆族，逐项统计并以 JSON 输出汇总
"""
import argparse
import json
import logging
import os
import random
import sys
import time
from typing import Any, Dict, List

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.classify import CaseId, classify
from core.corpus import (
    CorpusCurve,
    build_corpus,
    elliptic_family_coefficients,
    random_constant_verdict,
    random_elliptic_pair,
)
from core.errors import DegenerateLineError, InsufficientSamplesError, SingularPointError
from core.fibration import family_from_coefficients, is_locally_trivial, j_constancy
from core.moduli import constant_moduli_oracle
from core.parser import parse_family, parse_form
from core.pencil import LocusKind, sample_lines, setup, special_lines, t_locus, tangent_point
from core.weierstrass import cyclic_generator, decide, expand_normal_form, reduce, verify_automorphism
from utils.common import LogUtils

logger = logging.getLogger("scripts.run_acceptance")

D3_CASES = {
    "X^3+Y^3": CaseId.D3_CONCURRENT_LINES,
    "X^3+X*Y*Z": CaseId.D3_CONIC_LINE,
    "X^3+Y^2*Z": CaseId.D3_CUSPIDAL,
    "X^3+Y^3+Z^3": CaseId.D3_SMOOTH_J0,
}
D4_CASES = {
    "X^4-Y^4": CaseId.D4_CONCURRENT_LINES,
    "X^4-Y^2*Z^2": CaseId.D4_TWO_CONICS,
    "X^4+X*Y^3+X*Z^3": CaseId.D4_CUBIC_LINE,
    "X^4-Y^3*Z+Y*Z^3": CaseId.D4_CYCLIC_COVER,
    "X^4-Y^3*Z-Y^2*Z^2": CaseId.D4_TACNODE,
    "X^4-Y^3*Z": CaseId.D4_TRIPLE_POINT,
}
ELLIPTIC_EXAMPLES = {
    "z^2 = x^3 + t^2*x + t^3": True,
    "z^2 = x^3 + t": True,
    "z^2 = x^3 + t*x + 1": False,
}
TOL = 1e-8
TANGENT_TOL = 1e-7
TANGENT_GAP = 1e-3


def check_classification(cases: Dict[str, CaseId]) -> Dict[str, Any]:
    failures = []
    for text, expected in cases.items():
        w = reduce(setup(parse_form(text), (1, 0, 0)))
        result = classify(decide(w), w)
        if result.case_id is not expected:
            failures.append({"curve": text, "expected": expected.value, "got": result.case_id.value})
    return {"cases": len(cases), "failures": failures}


def check_oracle(corpus: List[CorpusCurve], samples: int, seed: int) -> Dict[str, Any]:
    disagreements = []
    for item in corpus:
        pencil = setup(item.curve, (1, 0, 0))
        symbolic = decide(reduce(pencil)).constant
        oracle = constant_moduli_oracle(pencil, samples=samples, seed=seed, tol=TOL).constant
        if symbolic != oracle or symbolic != item.positive:
            disagreements.append({"curve": item.curve.to_text(), "symbolic": symbolic, "oracle": oracle})
    return {"curves": len(corpus), "disagreements": disagreements}


def check_round_trip(count: int, seed: int) -> Dict[str, Any]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        verdict = random_constant_verdict(rng, rng.randint(3, 8))
        again = decide(reduce(setup(expand_normal_form(verdict), (1, 0, 0))))
        if not again.constant or again.k != verdict.k or again.H is None or not again.H.is_proportional(verdict.H):
            failures += 1
    return {"round_trips": count, "failures": failures}


def check_tangents(corpus: List[CorpusCurve], seed: int) -> Dict[str, Any]:
    bad_positive, bad_negative = [], []
    for item in corpus:
        pencil = setup(item.curve, (1, 0, 0))
        deviations = []
        for line in sample_lines(pencil, 20, seed):
            try:
                deviations.append(tangent_point(pencil, line).max_deviation)
            except (DegenerateLineError, SingularPointError):
                continue
        if item.positive and max(deviations, default=0.0) > TANGENT_TOL:
            bad_positive.append(item.label)
        if not item.positive and max(deviations, default=0.0) <= TANGENT_GAP:
            bad_negative.append(item.label)
    return {"positive_failures": bad_positive, "negative_failures": bad_negative}


def check_t_locus(corpus: List[CorpusCurve], seed: int) -> Dict[str, Any]:
    failures = []
    for item in corpus:
        if not item.positive:
            continue
        try:
            locus = t_locus(setup(item.curve, (1, 0, 0)), samples=12, seed=seed, tol=TOL)
        except InsufficientSamplesError as e:
            failures.append(f"{item.label}: {e}")
            continue
        ok = (
            locus.kind in (LocusKind.POINT, LocusKind.LINE_X0)
            and locus.max_x <= TANGENT_TOL
            and all(c.deviation <= TANGENT_TOL for c in locus.special_points)
        )
        if not ok:
            failures.append(item.label)
    return {"failures": failures}


def check_special_counts(corpus: List[CorpusCurve]) -> Dict[str, Any]:
    failures = []
    negative_hit = False
    for item in corpus:
        lines = special_lines(setup(item.curve, (1, 0, 0)), TOL)
        counts = [s.count for s in lines]
        if item.positive and any(c != 1 for c in counts):
            failures.append(item.label)
        if not item.positive and any(2 <= c <= item.d - 1 for c in counts):
            negative_hit = True
    return {"positive_failures": failures, "negative_with_intermediate_count": negative_hit}


def check_elliptic(count: int, seed: int) -> Dict[str, Any]:
    rng = random.Random(seed)
    failures = []
    families = [family_from_coefficients(elliptic_family_coefficients(*random_elliptic_pair(rng))) for _ in range(count)]
    for fam in families:
        report = j_constancy(fam.coefficient(1), fam.coefficient(0))
        verdict = is_locally_trivial(fam)
        if report.constant != verdict.isotrivial or not report.numeric_agrees:
            failures.append(fam.to_text())
    for text, expected in ELLIPTIC_EXAMPLES.items():
        if is_locally_trivial(family_from_coefficients(parse_family(text))).isotrivial != expected:
            failures.append(text)
    return {"families": count + len(ELLIPTIC_EXAMPLES), "failures": failures}


def check_automorphisms(corpus: List[CorpusCurve]) -> Dict[str, Any]:
    failures = []
    for item in corpus:
        if not item.positive:
            continue
        if not verify_automorphism(item.curve, cyclic_generator(item.k)):
            failures.append(item.label)
        wrong = item.k + 1
        divides = item.d % wrong == 0 or (item.has_x_factor and (item.d - 1) % wrong == 0)
        if not divides and verify_automorphism(item.curve, cyclic_generator(wrong)):
            failures.append(f"{item.label} (ζ_{wrong})")
    return {"failures": failures}


def main() -> int:
    parser = argparse.ArgumentParser(description="运行完整验收语料")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--positives", type=int, default=250)
    parser.add_argument("--negatives", type=int, default=250)
    parser.add_argument("--round-trips", type=int, default=100)
    parser.add_argument("--elliptic", type=int, default=100)
    parser.add_argument("--verbose", "-v", action="store_true")
    args = parser.parse_args()
    LogUtils.suppress_third_party_logs()
    LogUtils.configure(logging.INFO if args.verbose else logging.WARNING, ("core", "scripts"))

    corpus = build_corpus(args.seed, args.positives, args.negatives)
    summary: Dict[str, Any] = {}
    stages = [
        ("d3_classification", lambda: check_classification(D3_CASES)),
        ("oracle_agreement", lambda: check_oracle(corpus, 12, args.seed)),
        ("round_trip", lambda: check_round_trip(args.round_trips, args.seed)),
        ("tangent_concurrency", lambda: check_tangents(corpus, args.seed)),
        ("t_locus", lambda: check_t_locus(corpus, args.seed)),
        ("special_counts", lambda: check_special_counts(corpus)),
        ("elliptic_bridge", lambda: check_elliptic(args.elliptic, args.seed)),
        ("automorphisms", lambda: check_automorphisms(corpus)),
        ("d4_classification", lambda: check_classification(D4_CASES)),
    ]
    for name, stage in stages:
        start = time.perf_counter()
        summary[name] = stage()
        summary[name]["seconds"] = round(time.perf_counter() - start, 3)
        logger.info(f"{name} 完成")
    print(json.dumps(summary, ensure_ascii=False, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
