"""Spline space dimensions and the MS and LR B-spline collections."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .bspline import (
    TensorBSpline,
    expand,
    insert_knot_tensor,
    multiplicities,
    refine,
    support_status,
    traverses,
)
from .errors import ExpandedSplitTooShort, LRRulesViolated, NonConstantSplitResult, SpaceError
from .linalg import columns_rank
from .mesh import (
    HORIZONTAL,
    VERTICAL,
    LRMesh,
    SplitSpec,
    covers,
    cross_degree,
    expanded_knot_vector,
    initial_mesh,
    insert_split,
    knot_vector_on_split,
    multiplicity_over,
    validate_lr_rules,
)

MS = "MS"
LR = "LR"


@dataclass(frozen=True)
class SplineCollection:
    kind: str
    mesh: LRMesh
    bsplines: tuple
    provenance: str

    def __len__(self):
        return len(self.bsplines)

    def __iter__(self):
        return iter(self.bsplines)

    @property
    def keys(self):
        return {B.key for B in self.bsplines}

    def index_of(self, B) -> int:
        return [b.key for b in self.bsplines].index(B.key)


@dataclass(frozen=True)
class HandInHandReport:
    expanded: SplitSpec
    r: int
    restricted_count: int
    restricted_rank: int
    goes_hand_in_hand: bool


def _sorted(bsplines):
    return tuple(sorted(bsplines, key=lambda B: (B.support[2], B.support[0], B.key)))


# -- dimensions ------------------------------------------------------------------

def dim_univariate(knots, p) -> int:
    return max(sum(m for _, m in knots) - (p + 1), 0)


def dim_lr(mesh: LRMesh, check_rules=True) -> int:
    """Dimension of the spline space from the vertex/meshline/element counts."""
    if check_rules and mesh.is_lr:
        bad = validate_lr_rules(mesh)
        if bad:
            raise LRRulesViolated("; ".join(v.message for v in bad))
    p1, p2 = mesh.degree
    total = sum((p1 - v.mu1 + 1) * (p2 - v.mu2 + 1) for v in mesh.vertices)
    for line in mesh.meshlines:
        if line.axis == VERTICAL:
            total -= (p2 + 1) * (p1 - line.multiplicity + 1)
        else:
            total -= (p1 + 1) * (p2 - line.multiplicity + 1)
    return total + len(mesh.elements) * (p1 + 1) * (p2 + 1)


def dim_increment(mesh_before: LRMesh, split: SplitSpec) -> int:
    """Dimension gained by inserting ``split``: expanded length minus p+1.

    A split of multiplicity m counts as m unit insertions in a row; each
    intermediate mesh must itself have constant splits.
    """
    total = 0
    mesh = mesh_before
    unit = SplitSpec(split.axis, split.fixed, split.lo, split.hi, 1)
    for _ in range(split.multiplicity):
        try:
            mesh = insert_split(mesh, unit)
        except NonConstantSplitResult:
            raise SpaceError(f"{split} cannot be taken apart into unit insertions") from None
        total += _increment(mesh, unit)[1]
    return total


def _increment(after, split):
    expanded, _, length = expanded_knot_vector(after, split)
    r = length - cross_degree(after.degree, split.axis) - 1
    if r < 1:
        raise ExpandedSplitTooShort(f"expanded split has length {length}, gain {r}")
    return expanded, r


# -- minimal support enumeration ------------------------------------------------------

def _edge_windows(mesh, axis, run_lo, run_hi, p):
    """Knot vectors along ``axis`` for a support whose cross extent is [run_lo, run_hi].

    Yields ``(lo, hi, knots)`` where the interior knots are exactly the lines
    of this axis traversing the support with their multiplicities.
    """
    lines = []
    for fixed in sorted(mesh.fixed_values(axis)):
        pieces = mesh.line(axis, fixed)
        mu = multiplicity_over(pieces, run_lo, run_hi) if covers(pieces, run_lo, run_hi) else 0
        lines.append((fixed, mu))
    for i, (lo, mu_lo) in enumerate(lines):
        if not mu_lo:
            continue
        inner = 0
        interior = []
        for hi, mu_hi in lines[i + 1:]:
            if mu_hi:
                free = p + 2 - inner
                for m_lo in range(1, min(mu_lo, free - 1) + 1):
                    m_hi = free - m_lo
                    if 1 <= m_hi <= mu_hi:
                        yield lo, hi, (lo,) * m_lo + tuple(interior) + (hi,) * m_hi
                inner += mu_hi
                interior += [hi] * mu_hi
                if inner > p:
                    break


def _knots_between(mesh, axis, lo, hi, run_lo, run_hi, p):
    """Knot vectors with end knots ``lo`` and ``hi`` for a fixed cross extent."""
    mus = []
    for fixed in (lo, hi):
        pieces = mesh.line(axis, fixed)
        mus.append(multiplicity_over(pieces, run_lo, run_hi))
    if not all(mus):
        return []
    interior = []
    for fixed in sorted(mesh.fixed_values(axis)):
        if lo < fixed < hi:
            pieces = mesh.line(axis, fixed)
            if covers(pieces, run_lo, run_hi):
                interior += [fixed] * multiplicity_over(pieces, run_lo, run_hi)
    free = p + 2 - len(interior)
    out = []
    for m_lo in range(1, min(mus[0], free - 1) + 1):
        m_hi = free - m_lo
        if 1 <= m_hi <= mus[1]:
            out.append((lo,) * m_lo + tuple(interior) + (hi,) * m_hi)
    return out


def enumerate_ms(mesh: LRMesh) -> SplineCollection:
    """All B-splines of the mesh degree with minimal support on ``mesh``.

    Support rectangles are grown from pairs of horizontal lines; for each such
    pair the x knots are read off the vertical lines that traverse it, and the
    y knots are then read off the horizontals traversing the x extent.
    """
    p1, p2 = mesh.degree
    found = {}
    ys = sorted(mesh.fixed_values(HORIZONTAL))
    for j, y0 in enumerate(ys):
        for y1 in ys[j + 1:]:
            for x0, x1, xk in _edge_windows(mesh, VERTICAL, y0, y1, p1):
                for yk in _knots_between(mesh, HORIZONTAL, y0, y1, x0, x1, p2):
                    B = TensorBSpline(mesh.degree, xk, yk)
                    if B.key not in found and support_status(B, mesh).minimal:
                        found[B.key] = B
    return SplineCollection(MS, mesh, _sorted(found.values()), "enumerated")


# -- LR algorithm ------------------------------------------------------------------------

def tensor_basis(mesh: LRMesh):
    """Curry-Schoenberg basis of a tensor mesh, unit weights."""
    if not mesh.is_lr:
        raise SpaceError("tensor basis needs a tensor origin")
    xk, yk = mesh.tensor
    X, Y = expand(xk), expand(yk)
    p1, p2 = mesh.degree
    out = []
    for j in range(len(Y) - p2 - 1):
        for i in range(len(X) - p1 - 1):
            out.append(TensorBSpline(mesh.degree, X[i:i + p1 + 2], Y[j:j + p2 + 2]))
    return out


def _refine_collection(members, mesh, split):
    """Split members until all have minimal support on ``mesh`` (FIFO)."""
    queue = deque()
    for key, B in members.items():
        x0, x1, y0, y1 = B.support
        lo, hi, cross = (x0, x1, (y0, y1)) if split.axis == VERTICAL else (y0, y1, (x0, x1))
        if lo < split.fixed < hi and split.lo <= cross[1] and cross[0] <= split.hi:
            queue.append(key)
    while queue:
        key = queue.popleft()
        B = members.get(key)
        if B is None:
            continue
        status = support_status(B, mesh)
        if status.minimal:
            continue
        if status.witness is None or status.status != "SupportNotMinimal":
            raise SpaceError(f"{B} lost its support during refinement")
        del members[key]
        w = status.witness
        left, _, right, _ = insert_knot_tensor(B, w.axis, w.fixed)
        for child in (left, right):
            if not child.weight:
                continue
            old = members.get(child.key)
            weight = child.weight + (old.weight if old else 0)
            members[child.key] = child.with_weight(weight)
            queue.append(child.key)


def derive_lr(initial: LRMesh, history=None) -> SplineCollection:
    """LR B-splines of ``initial`` refined along ``history``.

    ``initial`` may also be a refined LR-mesh, in which case its own history is
    replayed from its tensor origin and ``history`` is appended.
    """
    start = initial_mesh(initial)
    steps = tuple(initial.history) + tuple(history or ())
    mesh = start
    members = {B.key: B for B in tensor_basis(start)}
    for split in steps:
        mesh = insert_split(mesh, split)
        _refine_collection(members, mesh, split)
    bad = validate_lr_rules(mesh)
    if bad:
        raise LRRulesViolated("; ".join(v.message for v in bad))
    return SplineCollection(LR, mesh, _sorted(members.values()), "refined")


def collection(mesh: LRMesh, kind: str) -> SplineCollection:
    kind = kind.upper()
    if kind == MS:
        return enumerate_ms(mesh)
    if kind == LR:
        return derive_lr(mesh)
    raise ValueError(f"unknown collection kind {kind!r}")


# -- hand in hand -----------------------------------------------------------------------------

def restriction_coefficients(kv, p, target):
    """Coordinates of B[kv] in the B-spline basis of the knot vector ``target``."""
    target = tuple(target)
    windows = {target[i:i + p + 2]: i for i in range(len(target) - p - 1)}
    have = dict(multiplicities(kv))
    extra = []
    for t, m in multiplicities(target):
        if kv[0] < t < kv[-1]:
            extra += [t] * (m - have.get(t, 0))
    vec = [Fraction(0)] * len(windows)
    for w, c in refine(kv, p, extra).items():
        if w not in windows:
            raise SpaceError(f"{w} is not a window of the knot vector on the split")
        vec[windows[w]] += c
    return vec


def hand_in_hand(mesh_before: LRMesh, split: SplitSpec, kind: str) -> HandInHandReport:
    after = insert_split(mesh_before, split)
    expanded, r = _increment(after, split)
    knots, _ = knot_vector_on_split(after, expanded)
    target = expand(knots)
    coll = collection(after, kind)
    q = cross_degree(after.degree, split.axis)
    crossing = [B for B in coll if traverses(expanded, B)]
    vectors = []
    for B in crossing:
        kv = B.xknots if expanded.axis == HORIZONTAL else B.yknots
        vectors.append(restriction_coefficients(kv, q, target))
    rank = columns_rank(vectors)
    return HandInHandReport(expanded, r, len(crossing), rank, rank == r)
