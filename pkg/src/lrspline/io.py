"""The ``lrspec/1`` mesh file format.

A document is YAML (JSON is accepted as a subset)::

    format: lrspec/1
    degree: [2, 2]
    domain: ["0", "5/4", "0", "1"]
    x_knots: [{pos: "0", mult: 1}, {pos: "1/4", mult: 1}, ...]
    y_knots: [...]
    insertions:
      - {axis: h, at: "5/9", from: "0", to: "3/4", mult: 1}

Rationals are integers or ``"a/b"`` strings; floats are rejected.  A general
box-mesh without a tensor origin is written with a ``segments`` list (same
keys as an insertion) in place of the knots and insertions.
"""

from __future__ import annotations

import re
import warnings
from fractions import Fraction

import yaml

from .errors import LRSplineError, ParseError, SemanticError
from .mesh import HORIZONTAL, VERTICAL, LRMesh, SplitSpec, box_mesh, insert_split, new_tensor_mesh
from .mesh import validate_lr_rules

FORMAT = "lrspec/1"
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")
_AXES = {"v": VERTICAL, "h": HORIZONTAL}
_AXIS_TAGS = {VERTICAL: "v", HORIZONTAL: "h"}


class LRRuleWarning(UserWarning):
    """A parsed mesh breaks an LR-rule; raised as an error under ``strict``."""


def rational_str(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(value, where="value", index=None) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SemanticError(f"{where}: {value!r} is not an exact rational", index)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL.fullmatch(text):
            try:
                return Fraction(text)
            except ZeroDivisionError:
                pass
        elif "." in text or "e" in text.lower():
            raise SemanticError(f"{where}: decimal {value!r} is not allowed, write a/b", index)
        raise SemanticError(f"{where}: cannot read {value!r} as a rational", index)
    raise SemanticError(f"{where}: expected a rational, got {type(value).__name__}", index)


def _int(value, where, index=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SemanticError(f"{where}: expected an integer, got {value!r}", index)
    return value


def _load(data):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}", 1, exc.start + 1) from None
    try:
        doc = yaml.safe_load(data)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (1, 1)
        raise ParseError(exc.problem or str(exc), line, col) from None
    except yaml.YAMLError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a mapping", 1, 1)
    return doc


def _knots(doc, key):
    raw = doc.get(key)
    if not isinstance(raw, list) or not raw:
        raise SemanticError(f"{key} must be a non-empty list", None)
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "pos" not in item:
            raise SemanticError(f"{key}[{i}] needs a pos", None)
        out.append((parse_rational(item["pos"], f"{key}[{i}].pos"),
                    _int(item.get("mult", 1), f"{key}[{i}].mult")))
    return out


def _split(item, i, label="insertion"):
    if not isinstance(item, dict):
        raise SemanticError(f"{label} {i} must be a mapping", i)
    missing = [k for k in ("axis", "at", "from", "to") if k not in item]
    if missing:
        raise SemanticError(f"{label} {i} lacks {', '.join(missing)}", i)
    axis = _AXES.get(str(item["axis"]).lower())
    if axis is None:
        raise SemanticError(f"{label} {i}: axis must be 'v' or 'h'", i)
    try:
        return SplitSpec(axis, parse_rational(item["at"], f"{label} {i}.at", i),
                         parse_rational(item["from"], f"{label} {i}.from", i),
                         parse_rational(item["to"], f"{label} {i}.to", i),
                         _int(item.get("mult", 1), f"{label} {i}.mult", i))
    except ValueError as exc:
        raise SemanticError(f"{label} {i}: {exc}", i) from None


def parse_mesh_spec(data, strict=False) -> LRMesh:
    """Build the mesh described by an ``lrspec/1`` document (bytes or text).

    LR-rule violations produce :class:`LRRuleWarning`; with ``strict`` they
    raise :class:`SemanticError` naming the offending insertion.
    """
    doc = _load(data)
    if doc.get("format", FORMAT) != FORMAT:
        raise SemanticError(f"unsupported format {doc.get('format')!r}", None)
    degree = doc.get("degree")
    if not isinstance(degree, list) or len(degree) != 2:
        raise SemanticError("degree must be a list [p1, p2]", None)
    degree = tuple(_int(d, "degree") for d in degree)
    if min(degree) < 0:
        raise SemanticError("degrees must be nonnegative", None)

    if "segments" in doc:
        domain = doc.get("domain")
        if not isinstance(domain, list) or len(domain) != 4:
            raise SemanticError("a segments document needs domain [x0, x1, y0, y1]", None)
        domain = tuple(parse_rational(v, "domain") for v in domain)
        segs = [_split(s, i, "segment") for i, s in enumerate(doc["segments"] or [])]
        try:
            return box_mesh(domain, [(s.axis, s.fixed, s.lo, s.hi, s.multiplicity) for s in segs],
                            degree)
        except LRSplineError as exc:
            raise SemanticError(str(exc), None) from None

    try:
        mesh = new_tensor_mesh(_knots(doc, "x_knots"), _knots(doc, "y_knots"), degree)
    except LRSplineError as exc:
        raise SemanticError(str(exc), None) from None
    if "domain" in doc:
        domain = doc["domain"]
        if not isinstance(domain, list) or len(domain) != 4:
            raise SemanticError("domain must be [x0, x1, y0, y1]", None)
        if tuple(parse_rational(v, "domain") for v in domain) != mesh.domain:
            raise SemanticError("domain disagrees with the outer knots", None)
    for i, item in enumerate(doc.get("insertions") or []):
        split = _split(item, i)
        try:
            mesh = insert_split(mesh, split)
        except LRSplineError as exc:
            raise SemanticError(str(exc), i) from None

    for v in validate_lr_rules(mesh):
        message = f"LR-rule {v.rule}: {v.message}"
        if strict:
            raise SemanticError(message, v.step)
        warnings.warn(message, LRRuleWarning, stacklevel=2)
    return mesh


def _flow(item) -> str:
    parts = []
    for k, v in item.items():
        parts.append(f"{k}: {v}" if isinstance(v, int) else f'{k}: "{v}"')
    return "{" + ", ".join(parts) + "}"


def _split_item(s: SplitSpec):
    return {"axis": _AXIS_TAGS[s.axis], "at": rational_str(s.fixed), "from": rational_str(s.lo),
            "to": rational_str(s.hi), "mult": s.multiplicity}


def serialize_mesh_spec(mesh: LRMesh) -> str:
    """Deterministic ``lrspec/1`` text; ``parse_mesh_spec`` inverts it exactly."""
    out = [f"format: {FORMAT}", f"degree: [{mesh.degree[0]}, {mesh.degree[1]}]",
           "domain: [" + ", ".join(f'"{rational_str(v)}"' for v in mesh.domain) + "]"]
    if not mesh.is_lr:
        out.append("segments:")
        for (axis, fixed), pieces in sorted(mesh.lines.items()):
            for lo, hi, m in pieces:
                out.append("  - " + _flow(_split_item(SplitSpec(axis, fixed, lo, hi, m))))
        return "\n".join(out) + "\n"
    xk, yk = mesh.tensor
    for name, knots in (("x_knots", xk), ("y_knots", yk)):
        out.append(f"{name}:")
        for t, m in knots:
            out.append("  - " + _flow({"pos": rational_str(t), "mult": m}))
    if mesh.history:
        out.append("insertions:")
        for s in mesh.history:
            out.append("  - " + _flow(_split_item(s)))
    else:
        out.append("insertions: []")
    return "\n".join(out) + "\n"


def load_mesh(path, strict=False) -> LRMesh:
    with open(path, "rb") as fh:
        return parse_mesh_spec(fh.read(), strict=strict)
