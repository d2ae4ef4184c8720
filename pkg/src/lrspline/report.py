"""Machine-readable reports.  Rationals always travel as ``"a/b"`` strings."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .bspline import TensorBSpline
from .io import rational_str
from .mesh import VERTICAL, Element, LRMesh, Meshline, SplitSpec


def bspline_dict(B: TensorBSpline) -> dict:
    return {"x": [rational_str(t) for t in B.xknots], "y": [rational_str(t) for t in B.yknots],
            "weight": rational_str(B.weight)}


def split_dict(s) -> dict:
    return {"axis": "v" if s.axis == VERTICAL else "h", "at": rational_str(s.fixed),
            "from": rational_str(s.lo), "to": rational_str(s.hi), "mult": s.multiplicity}


def jsonable(obj):
    """Recursively convert library values into JSON-ready data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, TensorBSpline):
        return bspline_dict(obj)
    if isinstance(obj, (SplitSpec, Meshline)):
        return split_dict(obj)
    if isinstance(obj, Element):
        return [rational_str(v) for v in (obj.x_lo, obj.x_hi, obj.y_lo, obj.y_hi)]
    if isinstance(obj, LRMesh):
        return mesh_summary(obj)
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.repr}
    if isinstance(obj, float):
        raise TypeError("floats never enter a report")
    return str(obj)


def mesh_summary(mesh: LRMesh) -> dict:
    return {
        "degree": list(mesh.degree),
        "domain": [rational_str(v) for v in mesh.domain],
        "elements": len(mesh.elements),
        "meshlines": len(mesh.meshlines),
        "vertices": len(mesh.vertices),
        "history": [split_dict(s) for s in mesh.history],
    }


def dependence_dict(report) -> dict:
    out = {
        "rank": report.rank,
        "nullity": report.nullity,
        "independent": report.independent,
        "active_set": list(report.active_set),
        "null_basis": [[rational_str(v) for v in vec] for vec in report.null_basis],
    }
    if report.circuit:
        out["circuit"] = [
            {**bspline_dict(B), "coefficient": rational_str(a)}
            for B, a in zip(report.circuit_bsplines(), report.coefficients)
        ]
    if report.diagnostics is not None:
        d = report.diagnostics
        out["diagnostics"] = {
            "passed": d.passed,
            "nestedness": jsonable(d.nestedness),
            "meshline_share": {"passed": d.meshline_share.passed,
                               "failures": jsonable(d.meshline_share.failures)},
            "t_vertices": jsonable(d.t_vertices),
        }
    return out


def peel_dict(report) -> dict:
    return {
        "verdict": report.verdict,
        "improved_used": report.improved_used,
        "overloaded_elements": len(report.overloaded_elements),
        "overloaded_bsplines": jsonable(sorted(report.overloaded_bsplines, key=lambda B: B.key)),
        "rounds": [jsonable(sorted(r, key=lambda B: B.key)) for r in report.rounds],
    }


def hand_in_hand_dict(report) -> dict:
    return {
        "expanded": split_dict(report.expanded),
        "r": report.r,
        "restricted_count": report.restricted_count,
        "restricted_rank": report.restricted_rank,
        "goes_hand_in_hand": report.goes_hand_in_hand,
    }


def to_json(data) -> str:
    return json.dumps(jsonable(data), indent=2) + "\n"


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return "" if value is None else str(value).lower() if isinstance(value, bool) else str(value)


def to_tsv(data) -> str:
    """Tab-delimited view: scalars as ``key<TAB>value``, lists of records as tables."""
    data = jsonable(data)
    lines = []
    tables = []
    for key, value in data.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            tables.append((key, value))
        else:
            lines.append(f"{key}\t{_cell(value)}")
    for key, rows in tables:
        cols = list(rows[0])
        lines.append("")
        lines.append(f"# {key}")
        lines.append("\t".join(cols))
        for row in rows:
            lines.append("\t".join(_cell(row.get(c)) for c in cols))
    return "\n".join(lines) + "\n"
