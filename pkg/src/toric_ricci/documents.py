"""Problem documents, the example catalog, and report generation.

Documents are JSON objects.  Every rational is written as a string
``"p/q"`` (integers may be bare); simple-root indices are 1-based.

    {
      "query": "ricci" | "fano" | "ample" | "toric_ricci",
      "lie": {"factors": [["A", 1]],
              "parabolic_simple_roots": [],
              "positive_m_roots": "default" | [[-1], ...]},
      "fiber": {"dim": 1, "rays": [[1], [-1]]},
      "tau": {"matrix": [["1"]]},
      "lifted_polytope": [["1", "1"], ["-1", "1"]],     # ample only: rows a_1..a_m, c
      "character": ["0"],                              # ample only: values on coroots
      "toric_polytope": [["1", "0", "1"], ...]         # toric_ricci only, optional
    }
"""
from __future__ import annotations

import copy
import json
import re
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

from . import _linalg as la
from .bundle import (BundleSpec, FanoFiber, TorusMap, build_delta_M, canonical_shift, check_ample,
                     check_fano, density_forms, pullback_forms)
from .exceptions import SchemaError
from .lie import build_root_system, make_flag
from .polytope import AffineForm, RationalPolytope, brute_force_integrate, moments
from .ricci import bisect_check, compute_R, direct_R, toric_R

QUERIES = ("ricci", "fano", "ample", "toric_ricci")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

CATALOG: dict[str, dict] = {
    "su2-cp1": {
        "query": "ricci",
        "lie": {"factors": [["A", 1]], "parabolic_simple_roots": [], "positive_m_roots": [[-1]]},
        "fiber": {"dim": 1, "rays": [[1], [-1]]},
        "tau": {"matrix": [["1"]]},
    },
    "toric-p2": {
        "query": "toric_ricci",
        "fiber": {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]]},
    },
    "toric-blowup-p2": {
        "query": "toric_ricci",
        "fiber": {"dim": 2, "rays": [[1, 0], [0, 1], [1, 1], [-1, -1]]},
    },
    "toric-p1xp1": {
        "query": "toric_ricci",
        "fiber": {"dim": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]]},
    },
    "a2-full-flag": {
        "query": "ricci",
        "lie": {"factors": [["A", 2]], "parabolic_simple_roots": [], "positive_m_roots": "default"},
        "fiber": {"dim": 1, "rays": [[1], [-1]]},
        "tau": {"matrix": [["1", "0"]]},
    },
    "a2-partial-flag": {
        "query": "ricci",
        "lie": {"factors": [["A", 2]], "parabolic_simple_roots": [1], "positive_m_roots": "default"},
        "fiber": {"dim": 1, "rays": [[1], [-1]]},
        "tau": {"matrix": [["0", "1"]]},
    },
    "a3-full-flag-p2": {
        "query": "ricci",
        "lie": {"factors": [["A", 3]], "parabolic_simple_roots": [], "positive_m_roots": "default"},
        "fiber": {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]]},
        "tau": {"matrix": [["1/2", "0", "0"], ["0", "0", "1/2"]]},
    },
}


def catalog(name: str) -> dict:
    if name not in CATALOG:
        raise SchemaError("example", f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}")
    return copy.deepcopy(CATALOG[name])


# ---------------------------------------------------------------------------
# parsing


def parse_rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(path, f"expected a rational string 'p/q', got {value!r}")
    text = str(value).strip()
    if not _RATIONAL.match(text):
        raise SchemaError(path, f"malformed rational {value!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise SchemaError(path, f"zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected a list, got {type(value).__name__}")
    return value


def _obj(doc: dict, key: str, path: str) -> dict:
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing")
    val = doc[key]
    if not isinstance(val, dict):
        raise SchemaError(f"{path}.{key}", "expected an object")
    return val


def _matrix(rows: Any, path: str, width: int | None = None) -> list[list[Fraction]]:
    rows = _list(rows, path)
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{path}[{i}]")
        if width is not None and len(row) != width:
            raise SchemaError(f"{path}[{i}]", f"expected {width} entries, got {len(row)}")
        out.append([parse_rational(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    if not out:
        raise SchemaError(path, "empty matrix")
    return out


def _hrep(rows: Any, path: str, dim: int) -> list[AffineForm]:
    return [AffineForm(r[:-1], r[-1]) for r in _matrix(rows, path, dim + 1)]


def parse_document(doc: Any) -> dict:
    """Validate a problem document; returns it in normalized form."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "document must be a JSON object")
    known = {"query", "lie", "fiber", "tau", "lifted_polytope", "character", "toric_polytope"}
    for key in doc:
        if key not in known:
            raise SchemaError(f"$.{key}", "unknown field")
    query = doc.get("query")
    if query not in QUERIES:
        raise SchemaError("$.query", f"expected one of {QUERIES}, got {query!r}")
    out: dict = {"query": query}

    fiber = _obj(doc, "fiber", "$")
    dim = _int(fiber.get("dim"), "$.fiber.dim")
    if dim < 1:
        raise SchemaError("$.fiber.dim", "must be >= 1")
    rays = _list(fiber.get("rays"), "$.fiber.rays")
    if not rays:
        raise SchemaError("$.fiber.rays", "at least one ray is required")
    norm_rays = []
    for i, r in enumerate(rays):
        r = _list(r, f"$.fiber.rays[{i}]")
        if len(r) != dim:
            raise SchemaError(f"$.fiber.rays[{i}]", f"expected {dim} entries")
        norm_rays.append([_int(c, f"$.fiber.rays[{i}][{j}]") for j, c in enumerate(r)])
    out["fiber"] = {"dim": dim, "rays": norm_rays}

    if query == "toric_ricci":
        if "toric_polytope" in doc:
            out["toric_polytope"] = [[la.fmt(x) for x in row]
                                     for row in _matrix(doc["toric_polytope"], "$.toric_polytope", dim + 1)]
        return out

    lie = _obj(doc, "lie", "$")
    factors = []
    for i, f in enumerate(_list(lie.get("factors"), "$.lie.factors")):
        f = _list(f, f"$.lie.factors[{i}]")
        if len(f) != 2 or not isinstance(f[0], str):
            raise SchemaError(f"$.lie.factors[{i}]", "expected [family, rank]")
        factors.append([f[0].upper(), _int(f[1], f"$.lie.factors[{i}][1]")])
    if not factors:
        raise SchemaError("$.lie.factors", "at least one factor is required")
    parab = [_int(j, f"$.lie.parabolic_simple_roots[{i}]")
             for i, j in enumerate(_list(lie.get("parabolic_simple_roots", []), "$.lie.parabolic_simple_roots"))]
    orient = lie.get("positive_m_roots", "default")
    if orient != "default":
        orient = [[_int(c, f"$.lie.positive_m_roots[{i}][{j}]") for j, c in
                   enumerate(_list(r, f"$.lie.positive_m_roots[{i}]"))]
                  for i, r in enumerate(_list(orient, "$.lie.positive_m_roots"))]
    out["lie"] = {"factors": factors, "parabolic_simple_roots": sorted(parab), "positive_m_roots": orient}

    tau = _obj(doc, "tau", "$")
    matrix = _matrix(tau.get("matrix"), "$.tau.matrix")
    if len(matrix) != dim:
        raise SchemaError("$.tau.matrix", f"expected {dim} rows (fiber torus rank)")
    width = len(matrix[0])
    if any(len(r) != width for r in matrix):
        raise SchemaError("$.tau.matrix", "rows of different lengths")
    out["tau"] = {"matrix": [[la.fmt(x) for x in row] for row in matrix]}

    if query == "ample":
        if "lifted_polytope" not in doc or "character" not in doc:
            raise SchemaError("$", "ample queries need lifted_polytope and character")
        lifted = _matrix(doc["lifted_polytope"], "$.lifted_polytope", dim + 1)
        out["lifted_polytope"] = [[la.fmt(x) for x in row] for row in lifted]
        char = [parse_rational(c, f"$.character[{i}]") for i, c in enumerate(_list(doc["character"], "$.character"))]
        if len(char) != width:
            raise SchemaError("$.character", f"expected {width} values (one per simple coroot)")
        out["character"] = [la.fmt(c) for c in char]
    return out


def emit_document(doc: dict) -> str:
    return json.dumps(parse_document(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def build_spec(doc: dict) -> BundleSpec:
    """Turn a normalized document into a :class:`BundleSpec` (raises precondition errors)."""
    fiber = FanoFiber.from_rays(doc["fiber"]["rays"])
    if doc["query"] == "toric_ricci":
        if "toric_polytope" in doc:
            dim = doc["fiber"]["dim"]
            poly = RationalPolytope.from_hrep(_hrep(doc["toric_polytope"], "$.toric_polytope", dim))
            return BundleSpec.toric(poly)
        return BundleSpec.toric(fiber.delta_F)
    lie = doc["lie"]
    rootsys = build_root_system(lie["factors"])
    parab = [j - 1 for j in lie["parabolic_simple_roots"]]
    flag = make_flag(rootsys, parab, lie["positive_m_roots"])
    tau = TorusMap([[Fraction(x) for x in row] for row in doc["tau"]["matrix"]])
    return BundleSpec(flag, fiber, tau)


# ---------------------------------------------------------------------------
# reports


def decimal_str(x: Fraction, digits: int = 15) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def _exact(values) -> dict:
    values = list(values)
    return {"exact": [la.fmt(v) for v in values], "decimal": [decimal_str(v) for v in values]}


def _form(f: AffineForm) -> dict:
    return {"coeffs": [la.fmt(c) for c in f.coeffs], "constant": la.fmt(f.constant)}


def _polytope(poly: RationalPolytope) -> dict:
    return {
        "hrep": [_form(f) for f in poly.hrep],
        "equations": [_form(g) for g in poly.equations],
        "vertices": [[la.fmt(c) for c in v] for v in poly.vertices],
    }


def _verdict(v) -> dict:
    out = {"status": v.status}
    if v.witness is not None:
        vertex, root, value = v.witness
        out["witness"] = {"vertex": [la.fmt(c) for c in vertex], "root": list(root), "value": la.fmt(value)}
    return out


def run(doc: dict, timing: bool = False) -> dict:
    """Answer the document's query. Schema errors and precondition errors propagate."""
    start = time.perf_counter()
    doc = parse_document(doc)
    spec = build_spec(doc)
    query = doc["query"]
    report: dict = {"input": doc, "query": query, "scale": "2pi"}

    if query == "toric_ricci":
        res = toric_R(spec.fiber.delta_F)
        report["scale"] = "1"
        report["polytope"] = _polytope(spec.fiber.delta_F)
    else:
        delta_M = build_delta_M(spec)
        report["delta_M"] = _polytope(delta_M)
        report["shift"] = _exact(canonical_shift(spec))
        report["density_forms"] = [dict(root=list(d.root), **_form(d.form)) for d in density_forms(spec)]
        report["pullback_forms"] = [_form(f) for f in pullback_forms(spec)]
        report["verdicts"] = {"fano": _verdict(check_fano(spec))}
        res = None
        if query == "ricci":
            res = compute_R(spec)
        elif query == "ample":
            dim = doc["fiber"]["dim"]
            lifted = RationalPolytope.from_hrep(_hrep(doc["lifted_polytope"], "$.lifted_polytope", dim))
            char = [Fraction(c) for c in doc["character"]]
            verdict = check_ample(spec, lifted, char)
            report["verdicts"]["ample"] = _verdict(verdict)
            report["shifted_lifted_polytope"] = _polytope(verdict.polytope)

    if res is not None:
        report["P"] = _exact(res.P)
        report["P_F"] = _exact(res.P_F)
        report["R"] = {"exact": la.fmt(res.R), "decimal": decimal_str(res.R)}
        report["binding_facets"] = list(res.binding_facets)
        report["is_KE"] = res.is_KE
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return report


def emit_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = [f"query: {report['query']}"]
    tag = " (x2pi)" if report["scale"] == "2pi" else ""
    if "delta_M" in report:
        poly = report["delta_M"]
        lines.append(f"Delta_M{tag} vertices:")
        lines += ["  (" + ", ".join(v) + ")" for v in poly["vertices"]]
        lines.append(f"Delta_M{tag} facets (form >= 0):")
        lines += [f"  [{i}] {_form_text(f)}" for i, f in enumerate(poly["hrep"])]
        for g in poly["equations"]:
            lines.append(f"  eq  {_form_text(g)} = 0")
        lines.append("shift 2pi*I_V^vee: (" + ", ".join(report["shift"]["exact"]) + ")")
        lines.append("density forms:")
        for d in report["density_forms"]:
            lines.append(f"  root {tuple(d['root'])}: {_form_text(d)}")
        for name, v in report["verdicts"].items():
            extra = ""
            if "witness" in v:
                w = v["witness"]
                extra = f" (worst vertex ({', '.join(w['vertex'])}), root {tuple(w['root'])}, value {w['value']})"
            lines.append(f"{name}: {v['status']}{extra}")
    if "polytope" in report:
        lines.append("polytope vertices:")
        lines += ["  (" + ", ".join(v) + ")" for v in report["polytope"]["vertices"]]
    if "R" in report:
        lines.append(f"P{tag}: (" + ", ".join(report["P"]["exact"]) + ")")
        lines.append("P_F: (" + ", ".join(report["P_F"]["exact"]) + ")")
        lines.append(f"R: {report['R']['exact']} ~ {report['R']['decimal']}")
        lines.append(f"binding facets: {report['binding_facets']}")
        lines.append(f"Kahler-Einstein: {'yes' if report['is_KE'] else 'no'}")
    if "timing_seconds" in report:
        lines.append(f"time: {report['timing_seconds']} s")
    return "\n".join(lines) + "\n"


def _form_text(f: dict) -> str:
    terms = [f"{c}*x{i + 1}" for i, c in enumerate(f["coeffs"]) if c != "0"]
    if f["constant"] != "0" or not terms:
        terms.append(f["constant"])
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# oracle comparison


def _rel(approx: float, exact: Fraction, scale: float) -> float:
    denom = abs(float(exact)) if exact != 0 else scale
    return abs(approx - float(exact)) / denom


def oracle_check(doc: dict, grid: int = 10**6, tol=Fraction(1, 10**12)) -> dict:
    """Compare the exact pipeline against grid integration and bisection.

    Integrals are those defining the barycenter on the total-space polytope
    (on the fiber polytope in toric mode).  A first moment whose exact value
    is zero is compared relative to ``mass * half-width`` along that axis.
    """
    doc = parse_document(doc)
    spec = build_spec(doc)
    tol = Fraction(tol)
    if spec.is_toric:
        poly, forms = spec.fiber.delta_F, []
        exact_R = toric_R(poly).R
    else:
        exact_R, _, poly = direct_R(spec)
        forms = [d.form for d in density_forms(spec)]
    mass, first = moments(poly, forms)
    approx_mass = brute_force_integrate(poly, forms, grid)
    d = poly.ambient_dim
    out_moments = []
    for i in range(d):
        coord = AffineForm.coordinate(d, i)
        approx = brute_force_integrate(poly, [coord, *forms], grid)
        coords = [float(v[i]) for v in poly.vertices]
        scale = abs(float(mass)) * max((max(coords) - min(coords)) / 2, 1e-300)
        out_moments.append({"exact": la.fmt(first[i]), "approx": approx,
                            "rel_error": _rel(approx, first[i], scale)})
    bis = bisect_check(spec, tol)
    result = {
        "grid": grid,
        "mass": {"exact": la.fmt(mass), "approx": approx_mass,
                 "rel_error": _rel(approx_mass, mass, 1.0)},
        "moments": out_moments,
        "bisection": {"value": la.fmt(bis), "decimal": decimal_str(bis, 20), "R": la.fmt(exact_R),
                      "error": float(abs(exact_R - bis)), "tolerance": la.fmt(tol)},
    }
    result["integration_ok"] = (result["mass"]["rel_error"] <= 1e-3
                                and all(m["rel_error"] <= 1e-3 for m in out_moments))
    result["bisection_ok"] = abs(exact_R - bis) <= tol
    return result
