"""Deterministic JSON report assembly for the classification pipeline.

A report is an ordered plain dict (insertion order is the contract) so
that ``render_json`` produces byte-identical output for identical jobs.
Timings are recorded as null: wall-clock numbers would break the
golden-file byte comparison, and nothing downstream consumes them.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Tuple

from .algebra import AlgebraDesc, make_algebra
from .classifier import (
    CASE_C_NONCM_GRADE2,
    CASE_C_NONCM_GRADE3,
    OUTSIDE_SCOPE,
    build_R,
    build_small_cm_certificate,
    classify,
    conductor,
    presentation_complex,
    q_shape,
)
from .homology import (
    FreeComplex,
    be_exactness_check,
    check_composition_zero,
    pd_depth_report,
    resolution_of_I,
    resolution_of_S_mod_Q,
    standard_grade_certificates,
)
from .poly import BaseRing, Poly, lift_f2, parse_poly
from .predicates import in_S2wedge4

__all__ = ["DEFAULT_OPTIONS", "assemble_report", "render_json", "parse_job"]

DEFAULT_OPTIONS = {"colon_search_degree": 6, "spot_check_seed": 1}

CM_TAG_PREFIXES = ("CaseA_", "CaseB_", "CaseC_CM_")


def cm_verdict_for_tag(case: str) -> Optional[bool]:
    """The CM verdict as a pure function of the case tag.

    None outside the covered scope: the structure theory makes no
    claim there, so the report carries null rather than a guess.
    """
    if case == OUTSIDE_SCOPE:
        return None
    return any(case.startswith(p) for p in CM_TAG_PREFIXES)


def parse_job(job: Dict[str, object]) -> Tuple[BaseRing, Poly, Poly, Dict[str, int]]:
    """Validate and parse a job dict {variables, f, g, options?}."""
    if not isinstance(job, dict):
        raise ValueError("job must be a JSON object")
    for key in ("variables", "f", "g"):
        if key not in job:
            raise ValueError("job is missing the %r field" % key)
    variables = job["variables"]
    if (
        not isinstance(variables, list)
        or not variables
        or not all(isinstance(v, str) for v in variables)
    ):
        raise ValueError("variables must be a non-empty list of strings")
    ring = BaseRing(tuple(variables))
    f = parse_poly(str(job["f"]), ring)
    g = parse_poly(str(job["g"]), ring)
    options = dict(DEFAULT_OPTIONS)
    extra = job.get("options", {})
    if not isinstance(extra, dict):
        raise ValueError("options must be a JSON object")
    for key, value in extra.items():
        if key not in DEFAULT_OPTIONS:
            raise ValueError("unknown option %r" % key)
        if not isinstance(value, int):
            raise ValueError("option %r must be an integer" % key)
        options[key] = value
    return ring, f, g, options


def _witnesses_block(alg: AlgebraDesc) -> Dict[str, Optional[str]]:
    out: Dict[str, Optional[str]] = {
        "h1": None,
        "a": None,
        "h2": None,
        "b": None,
        "a_prime": None,
        "b_prime": None,
    }
    if alg.wf is not None:
        out["h1"] = str(alg.wf.h)
        out["a"] = str(alg.wf.a)
    if alg.wg is not None:
        out["h2"] = str(alg.wg.h)
        out["b"] = str(alg.wg.a)
    w4f = in_S2wedge4(alg.f)
    if w4f is not None:
        out["a_prime"] = str(w4f.a_prime)
    w4g = in_S2wedge4(alg.g)
    if w4g is not None:
        out["b_prime"] = str(w4g.a_prime)
    return out


def _verified_complex_block(cx: FreeComplex, name: str) -> Dict[str, object]:
    certs = standard_grade_certificates(cx)
    verified = check_composition_zero(cx) and be_exactness_check(cx, certs)
    pd_bound, depth = pd_depth_report(cx, verified)
    block = {"name": name}
    block.update(cx.serialize())
    block["verified"] = verified
    block["pd_bound"] = pd_bound
    block["depth"] = depth
    block["grade_witnesses"] = [[str(w) for w in c.witness] for c in certs]
    return block


def assemble_report(
    ring: BaseRing, f: Poly, g: Poly, options: Optional[Dict[str, int]] = None
) -> Dict[str, object]:
    """Run the full pipeline and assemble the ordered report dict.

    Raises HypothesisViolation (and kin) for rejected inputs and
    InternalVerification-type errors when a structural identity fails;
    the CLI maps those to exit codes 2 and 3 respectively.
    """
    if options is None:
        options = dict(DEFAULT_OPTIONS)
    alg = make_algebra(ring, f, g)
    case = classify(alg)
    cm = cm_verdict_for_tag(case)

    report: Dict[str, object] = {
        "input": {
            "variables": list(ring.variables),
            "f": str(f),
            "g": str(g),
        },
        "case": case,
        "cm": cm,
        "witnesses": _witnesses_block(alg),
    }
    if case == OUTSIDE_SCOPE:
        report["q_shape"] = None
        report["ring_presentation"] = None
        report["conductor"] = None
        report["certificate"] = None
        report["resolutions"] = []
    else:
        shape = q_shape(alg)
        report["q_shape"] = {
            "tag": shape.tag,
            "z": str(shape.z),
            "c": str(shape.c),
            "e": str(shape.e),
        }
        pres = build_R(alg, case)
        report["ring_presentation"] = pres.serialize()
        report["conductor"] = conductor(alg, case, pres).serialize()
        if case in (CASE_C_NONCM_GRADE3, CASE_C_NONCM_GRADE2):
            cert = build_small_cm_certificate(alg, case)
            report["certificate"] = cert.serialize()
            resolutions = [
                _verified_complex_block(
                    resolution_of_I(alg.wf, alg.wg), "resolution_of_I"
                ),
                _verified_complex_block(
                    resolution_of_S_mod_Q(
                        lift_f2(shape.z), lift_f2(shape.c), lift_f2(shape.e)
                    ),
                    "resolution_of_S_mod_Q",
                ),
                _verified_complex_block(
                    presentation_complex(pres), "R_presentation"
                ),
            ]
            report["resolutions"] = resolutions
        else:
            report["certificate"] = None
            report["resolutions"] = []
    report["options"] = {k: options[k] for k in sorted(options)}
    report["timings"] = None
    return report


def render_json(report: Dict[str, object]) -> str:
    """Canonical JSON text: two-space indent, insertion order, LF, ASCII."""
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"
