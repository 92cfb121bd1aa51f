"""Serialization of job results: JSON, CSV and markdown tables.

Rationals are written as ``"p/q"`` strings in lowest terms (integers as
``"n"``) so output is exact and byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .flips import FlipStage, critical_values, flip_schedule, stage_is_consistent
from .lattice import SurfaceLattice, inertia
from .transition import TransitionReport
from .walls import Wall, WallType


def rational(x: Fraction | int) -> str:
    return str(Fraction(x))


def surface_record(surface: SurfaceLattice) -> dict[str, Any]:
    pos, neg, _ = inertia(surface.gram)
    warnings = []
    if surface.anticanonical_effective is None:
        warnings.append("ANTICANONICAL_EFFECTIVITY_UNASSERTED")
    return {
        "surface": surface.name,
        "b2": surface.rank,
        "gram": [list(r) for r in surface.gram],
        "K": list(surface.canonical),
        "K_squared": surface.K_squared,
        "signature": [pos, neg],
        "chi": surface.chi,
        "reference_ample": list(surface.reference_ample),
        "anticanonical_effective": surface.anticanonical_effective,
        "warnings": warnings,
    }


def wall_record(wall: Wall) -> dict[str, Any]:
    first = wall.classes[0]
    return {
        "zeta": list(first.zeta.coords),
        "ell": first.ell,
        "h_plus": first.h,
        "h_minus": first.h_neg,
        "N_plus": first.n_zeta,
        "N_minus": first.n_neg,
        "t": rational(wall.crossing_t),
        "primitive": list(wall.primitive.coords),
        "coincident": wall.coincident,
        "classes_on_wall": [list(c.zeta.coords) for c in wall.classes],
        "classes": [
            {"zeta": list(c.zeta.coords), "ell": c.ell, "h_plus": c.h, "h_minus": c.h_neg,
             "N_plus": c.n_zeta, "N_minus": c.n_neg, "zeta_sq": c.zeta_sq, "zeta_K": c.zeta_k,
             "degenerate": c.degenerate, "warnings": list(c.warnings)}
            for c in wall.classes
        ],
    }


def walls_record(walls: list[Wall], wt: WallType, oracle: dict | None = None) -> dict[str, Any]:
    warnings = []
    for w in walls:
        where = f"t={rational(w.crossing_t)}"
        if w.multi_class:
            warnings.append(f"MULTI_CLASS_WALL at {where}")
        if w.coincident:
            warnings.append(f"COINCIDENT_CROSSING at {where}")
        for c in w.classes:
            warnings += [f"{msg} at zeta={list(c.zeta.coords)}" for msg in c.warnings]
    if wt.lattice.anticanonical_effective is None:
        warnings.append("ANTICANONICAL_EFFECTIVITY_UNASSERTED")
    out = {"p": wt.p, "d": wt.d, "walls": [wall_record(w) for w in walls], "warnings": warnings}
    if oracle is not None:
        out["oracle"] = oracle
    return out


def transition_record(report: TransitionReport) -> dict[str, Any]:
    return {
        "kind": report.kind,
        "d": report.d,
        "normalization": report.normalization,
        "leading_only": report.leading_only,
        "walls": [
            {"zeta": list(e.zeta), "t": rational(e.crossing_t), "ell": e.ell, "h": e.h,
             "sign": e.sign, "a": rational(e.a), "alpha_sq": e.alpha_sq,
             "coeffs": [str(c) for c in e.polynomial.coeffs], "method": e.method,
             "value": rational(e.value),
             "cross_check": None if e.cross_check is None else rational(e.cross_check)}
            for e in report.entries
        ],
        "total": rational(report.total),
        "warnings": list(report.warnings),
    }


def _stage_record(stage: FlipStage) -> dict[str, Any]:
    return {"k": stage.k, "center": list(stage.center), "center_dim": stage.center_dim,
            "fiber_dims": list(stage.fiber_dims), "moduli_dim": stage.moduli_dim,
            "kind": stage.kind, "consistent": stage_is_consistent(stage)}


def flips_record(walls: list[Wall], wt: WallType) -> dict[str, Any]:
    out = []
    for w in walls:
        multiples = []
        for c in w.classes:
            scale = next(x // p for x, p in zip(c.zeta.coords, w.primitive.coords) if p)
            multiples.append((scale, c.ell))
        out.append({
            "t": rational(w.crossing_t),
            "primitive": list(w.primitive.coords),
            "classes": [
                {"zeta": list(c.zeta.coords), "ell": c.ell, "h": c.h,
                 "stages": [_stage_record(s) for s in flip_schedule(c, wt)]}
                for c in w.classes
            ],
            "critical_values": [{"t": rational(cv.t), "indices": list(cv.indices)}
                                for cv in critical_values(multiples)],
        })
    return {"d": wt.d, "walls": out, "warnings": []}


def verify_record(checks) -> dict[str, Any]:
    return {
        "checks": [{"name": c.name, "group": c.group, "passed": c.passed, "lhs": c.lhs, "rhs": c.rhs}
                   for c in checks],
        "passed": all(c.passed for c in checks),
        "failures": sum(not c.passed for c in checks),
    }


# ---------------------------------------------------------------------------
# renderers


def to_json(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def _rows(subcommand: str, record: dict[str, Any]) -> tuple[list[str], list[list[Any]]]:
    if subcommand == "surface":
        keys = sorted(record)
        return ["key", "value"], [[k, json.dumps(record[k], sort_keys=True)] for k in keys]
    if subcommand == "walls":
        head = ["t", "zeta", "ell", "h_plus", "h_minus", "N_plus", "N_minus", "classes_on_wall"]
        return head, [[w["t"], w["zeta"], w["ell"], w["h_plus"], w["h_minus"], w["N_plus"],
                       w["N_minus"], w["classes_on_wall"]] for w in record["walls"]]
    if subcommand == "delta":
        head = ["t", "zeta", "ell", "h", "sign", "a", "value"]
        rows = [[w["t"], w["zeta"], w["ell"], w["h"], w["sign"], w["a"], w["value"]] for w in record["walls"]]
        rows.append(["total", "", "", "", "", "", record["total"]])
        return head, rows
    if subcommand == "flips":
        head = ["t", "zeta", "k", "center", "center_dim", "fiber_dims", "moduli_dim", "kind", "consistent"]
        rows = []
        for w in record["walls"]:
            for c in w["classes"]:
                for s in c["stages"]:
                    rows.append([w["t"], c["zeta"], s["k"], s["center"], s["center_dim"],
                                 s["fiber_dims"], s["moduli_dim"], s["kind"], s["consistent"]])
        return head, rows
    if subcommand == "verify":
        head = ["status", "group", "check", "lhs", "rhs"]
        return head, [["PASS" if c["passed"] else "FAIL", c["group"], c["name"], c["lhs"], c["rhs"]]
                      for c in record["checks"]]
    raise ValueError(subcommand)


def _cell(v: Any) -> str:
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def to_csv(subcommand: str, record: dict[str, Any]) -> str:
    head, rows = _rows(subcommand, record)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(head)
    writer.writerows([[_cell(v) for v in r] for r in rows])
    return buf.getvalue()


def to_markdown(subcommand: str, record: dict[str, Any]) -> str:
    head, rows = _rows(subcommand, record)
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(v).replace("|", "\\|") for v in r) + " |")
    warnings = record.get("warnings") or []
    if warnings:
        lines.append("")
        lines += [f"- warning: {w}" for w in warnings]
    return "\n".join(lines) + "\n"


def render(subcommand: str, record: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(record)
    if fmt == "csv":
        return to_csv(subcommand, record)
    if fmt in ("md", "markdown"):
        return to_markdown(subcommand, record)
    raise ValueError(f"unknown format {fmt!r}")
