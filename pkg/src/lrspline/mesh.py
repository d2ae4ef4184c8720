"""Box-partitions and LR-meshes over exact rational coordinates.

A mesh is stored as a map from lines ``(axis, fixed)`` to sorted, disjoint
pieces ``(lo, hi, multiplicity)``.  Axis 1 holds vertical lines (``fixed`` is
an x value, the piece runs along y); axis 2 holds horizontal lines.  Vertices,
vertex-to-vertex meshlines and elements are derived views, so a mesh is a pure
function of its line pieces and the history is kept for replay only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    DanglingSplit,
    InvalidBoxPartition,
    MultiplicityExceedsDegreePlusOne,
    MultiplicityOverflow,
    NonConstantSplitResult,
    NonIncreasingKnots,
    SplitNotInMesh,
)

Rational = Fraction
VERTICAL = 1
HORIZONTAL = 2


def as_rational(value) -> Fraction:
    """Convert an int, str or Fraction to a Fraction.  Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact coordinate {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def own_degree(degree, axis):
    """Degree in the direction of the knots carried by an ``axis`` line."""
    return degree[axis - 1]


def cross_degree(degree, axis):
    """Degree of the direction along which an ``axis`` line runs."""
    return degree[2 - axis]


@dataclass(frozen=True, order=True)
class Meshline:
    axis: int
    fixed: Fraction
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1


@dataclass(frozen=True, order=True)
class SplitSpec:
    axis: int
    fixed: Fraction
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def __post_init__(self):
        if self.axis not in (VERTICAL, HORIZONTAL):
            raise ValueError(f"axis must be 1 or 2, got {self.axis}")
        for name in ("fixed", "lo", "hi"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not self.lo < self.hi:
            raise ValueError(f"split span must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.multiplicity < 1:
            raise ValueError("split multiplicity must be at least 1")

    def with_span(self, lo, hi) -> "SplitSpec":
        return SplitSpec(self.axis, self.fixed, lo, hi, self.multiplicity)

    def endpoints(self):
        """The two end points as (x, y) pairs."""
        if self.axis == VERTICAL:
            return (self.fixed, self.lo), (self.fixed, self.hi)
        return (self.lo, self.fixed), (self.hi, self.fixed)


@dataclass(frozen=True)
class Element:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    @property
    def area(self) -> Fraction:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)

    def sort_key(self):
        return (self.y_lo, self.x_lo)

    def contains_point(self, x, y) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi

    def range(self, axis):
        """Extent along the coordinate that an ``axis`` line fixes."""
        return (self.x_lo, self.x_hi) if axis == VERTICAL else (self.y_lo, self.y_hi)

    def cross_range(self, axis):
        """Extent along the direction an ``axis`` line runs."""
        return (self.y_lo, self.y_hi) if axis == VERTICAL else (self.x_lo, self.x_hi)


@dataclass(frozen=True)
class Vertex:
    x: Fraction
    y: Fraction
    mu1: int
    mu2: int
    kind: str

    @property
    def position(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class Violation:
    rule: int
    step: int | None
    split: SplitSpec | None
    length: int | None
    required: int | None
    message: str


# -- interval helpers over sorted pieces (lo, hi, mult) ----------------------

def covers(pieces, lo, hi) -> bool:
    """True when the union of ``pieces`` contains the closed interval [lo, hi]."""
    if lo == hi:
        return any(a <= lo <= b for a, b, _ in pieces)
    cur = lo
    for a, b, _ in pieces:
        if b <= cur:
            continue
        if a > cur:
            return False
        cur = b
        if cur >= hi:
            return True
    return False


def contains_point(pieces, c) -> bool:
    return any(a <= c <= b for a, b, _ in pieces)


def multiplicity_over(pieces, lo, hi) -> int:
    """Smallest multiplicity of the pieces covering [lo, hi]; 0 if uncovered."""
    if not covers(pieces, lo, hi):
        return 0
    if lo == hi:
        return max(m for a, b, m in pieces if a <= lo <= b)
    return min(m for a, b, m in pieces if a < hi and b > lo)


def _merge(pieces):
    out = []
    for a, b, m in sorted(pieces):
        if out and out[-1][1] == a and out[-1][2] == m:
            out[-1] = (out[-1][0], b, m)
        else:
            out.append((a, b, m))
    return tuple(out)


def _add_interval(pieces, lo, hi, mult):
    cuts = sorted({lo, hi} | {a for a, _, _ in pieces} | {b for _, b, _ in pieces})
    out = []
    for a, b in zip(cuts, cuts[1:]):
        m = 0
        for pa, pb, pm in pieces:
            if pa <= a and b <= pb:
                m = pm
                break
        if lo <= a and b <= hi:
            m += mult
        if m:
            out.append((a, b, m))
    return _merge(out)


def _runs(pieces):
    """Group pieces into maximal contiguous runs."""
    runs = []
    for piece in pieces:
        if runs and runs[-1][-1][1] == piece[0]:
            runs[-1].append(piece)
        else:
            runs.append([piece])
    return runs


# -- the mesh value -----------------------------------------------------------

class LRMesh:
    """Immutable box-mesh with multiplicities, optionally built as an LR-mesh.

    ``tensor`` holds the ``(x_knots, y_knots)`` of the initial tensor mesh when
    the mesh was produced by :func:`new_tensor_mesh` and :func:`insert_split`;
    ``previous`` is the mesh before the last history step.
    """

    def __init__(self, degree, domain, lines, history=(), tensor=None, previous=None):
        self.degree = tuple(degree)
        self.domain = tuple(domain)
        self.lines = {key: tuple(p) for key, p in sorted(lines.items()) if p}
        self.history = tuple(history)
        self.tensor = tensor
        self.previous = previous

    def __eq__(self, other):
        if not isinstance(other, LRMesh):
            return NotImplemented
        return (self.degree, self.domain, self.lines, self.history, self.tensor) == (
            other.degree, other.domain, other.lines, other.history, other.tensor)

    def __hash__(self):
        return hash((self.degree, self.domain, tuple(self.lines.items()), self.history))

    def __repr__(self):
        return (f"LRMesh(degree={self.degree}, domain={tuple(str(v) for v in self.domain)}, "
                f"lines={len(self.lines)}, history={len(self.history)})")

    @property
    def is_lr(self) -> bool:
        return self.tensor is not None

    def line(self, axis, fixed):
        return self.lines.get((axis, fixed), ())

    def fixed_values(self, axis):
        return [f for (a, f) in self.lines if a == axis]

    def same_mesh(self, other) -> bool:
        """Equality of the geometry and multiplicities, ignoring construction history."""
        return (self.degree, self.domain, self.lines) == (other.degree, other.domain, other.lines)

    @cached_property
    def vertex_positions(self):
        verticals = [(f, p) for (a, f), p in self.lines.items() if a == VERTICAL]
        horizontals = [(f, p) for (a, f), p in self.lines.items() if a == HORIZONTAL]
        points = set()
        for x, vp in verticals:
            for y, hp in horizontals:
                if contains_point(vp, y) and contains_point(hp, x):
                    points.add((x, y))
        return sorted(points, key=lambda v: (v[1], v[0]))

    @cached_property
    def cuts(self):
        """Vertex coordinates along every line, keyed like ``lines``."""
        out = {key: [] for key in self.lines}
        for x, y in self.vertex_positions:
            out[(VERTICAL, x)].append(y)
            out[(HORIZONTAL, y)].append(x)
        return {key: sorted(v) for key, v in out.items()}

    @cached_property
    def meshlines(self):
        atoms = []
        for (axis, fixed), pieces in self.lines.items():
            cuts = self.cuts[(axis, fixed)]
            for lo, hi, m in pieces:
                inner = [c for c in cuts if lo < c < hi]
                for a, b in zip([lo] + inner, inner + [hi]):
                    atoms.append(Meshline(axis, fixed, a, b, m))
        return tuple(atoms)

    def atoms_on(self, axis, fixed):
        return [m for m in self.meshlines if m.axis == axis and m.fixed == fixed]

    @cached_property
    def elements(self):
        return tuple(_derive_elements(self.domain, self.lines))

    @cached_property
    def vertices(self):
        return tuple(_classify(self, x, y) for x, y in self.vertex_positions)

    @cached_property
    def vertex_map(self):
        return {v.position: v for v in self.vertices}


def _arms(mesh, x, y):
    vp = mesh.line(VERTICAL, x)
    hp = mesh.line(HORIZONTAL, y)
    return {
        "up": any(a <= y < b for a, b, _ in vp),
        "down": any(a < y <= b for a, b, _ in vp),
        "right": any(a <= x < b for a, b, _ in hp),
        "left": any(a < x <= b for a, b, _ in hp),
    }


_OPPOSITE = {"up": "down", "down": "up", "left": "right", "right": "left"}


def _classify(mesh, x, y):
    mu1 = max((m for a, b, m in mesh.line(VERTICAL, x) if a <= y <= b), default=0)
    mu2 = max((m for a, b, m in mesh.line(HORIZONTAL, y) if a <= x <= b), default=0)
    a1, b1, a2, b2 = mesh.domain
    on_x = x in (a1, b1)
    on_y = y in (a2, b2)
    if on_x and on_y:
        kind = "corner"
    elif on_x or on_y:
        kind = "boundary"
    else:
        arms = _arms(mesh, x, y)
        missing = [k for k, present in arms.items() if not present]
        if not missing:
            kind = "cross"
        elif len(missing) == 1:
            kind = "T-" + _OPPOSITE[missing[0]]
        else:
            raise InvalidBoxPartition(f"vertex ({x}, {y}) has {4 - len(missing)} arms")
    return Vertex(x, y, mu1, mu2, kind)


def _derive_elements(domain, lines):
    xs = sorted(f for (a, f) in lines if a == VERTICAL)
    ys = sorted(f for (a, f) in lines if a == HORIZONTAL)
    nx, ny = len(xs) - 1, len(ys) - 1
    parent = list(range(nx * ny))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for j in range(ny):
        for i in range(nx - 1):
            if not covers(lines[(VERTICAL, xs[i + 1])], ys[j], ys[j + 1]):
                union(j * nx + i, j * nx + i + 1)
    for i in range(nx):
        for j in range(ny - 1):
            if not covers(lines[(HORIZONTAL, ys[j + 1])], xs[i], xs[i + 1]):
                union(j * nx + i, (j + 1) * nx + i)

    groups = {}
    for j in range(ny):
        for i in range(nx):
            groups.setdefault(find(j * nx + i), []).append((i, j))
    out = []
    for cells in groups.values():
        i0 = min(c[0] for c in cells)
        i1 = max(c[0] for c in cells)
        j0 = min(c[1] for c in cells)
        j1 = max(c[1] for c in cells)
        if len(cells) != (i1 - i0 + 1) * (j1 - j0 + 1):
            raise InvalidBoxPartition("mesh lines do not cut the domain into rectangles")
        out.append(Element(xs[i0], xs[i1 + 1], ys[j0], ys[j1 + 1]))
    out.sort(key=Element.sort_key)
    return out


def _check_partition(domain, lines):
    a1, b1, a2, b2 = domain
    for key, rng in (((VERTICAL, a1), (a2, b2)), ((VERTICAL, b1), (a2, b2)),
                     ((HORIZONTAL, a2), (a1, b1)), ((HORIZONTAL, b2), (a1, b1))):
        if not covers(lines.get(key, ()), *rng):
            raise InvalidBoxPartition(f"domain boundary line {key} is not fully present")
    for (axis, fixed), pieces in lines.items():
        fixed_rng = (a1, b1) if axis == VERTICAL else (a2, b2)
        run_rng = (a2, b2) if axis == VERTICAL else (a1, b1)
        if not fixed_rng[0] <= fixed <= fixed_rng[1]:
            raise InvalidBoxPartition(f"line {axis}@{fixed} lies outside the domain")
        for lo, hi, m in pieces:
            if m < 1:
                raise InvalidBoxPartition("multiplicities must be positive")
            if lo < run_rng[0] or hi > run_rng[1]:
                raise InvalidBoxPartition(f"line {axis}@{fixed} leaves the domain")
            for end in (lo, hi):
                if not contains_point(lines.get((3 - axis, end), ()), fixed):
                    raise DanglingSplit(f"line {axis}@{fixed} ends at {end} away from any orthogonal line")
    _derive_elements(domain, lines)


# -- constructors --------------------------------------------------------------

def _normalise_knots(knots, p, label):
    out = []
    for pos, mult in knots:
        pos = as_rational(pos)
        if out and pos <= out[-1][0]:
            raise NonIncreasingKnots(f"{label} positions must be strictly increasing")
        if not 1 <= mult <= p + 1:
            raise MultiplicityExceedsDegreePlusOne(
                f"{label} multiplicity {mult} at {pos} outside [1, {p + 1}]")
        out.append((pos, int(mult)))
    if len(out) < 2:
        raise NonIncreasingKnots(f"{label} needs at least two positions")
    return tuple(out)


def new_tensor_mesh(x_knots, y_knots, degree) -> LRMesh:
    """Tensor mesh from ``[(position, multiplicity), ...]`` for each axis."""
    degree = tuple(int(d) for d in degree)
    xk = _normalise_knots(x_knots, degree[0], "x_knots")
    yk = _normalise_knots(y_knots, degree[1], "y_knots")
    domain = (xk[0][0], xk[-1][0], yk[0][0], yk[-1][0])
    lines = {}
    for x, m in xk:
        lines[(VERTICAL, x)] = ((domain[2], domain[3], m),)
    for y, m in yk:
        lines[(HORIZONTAL, y)] = ((domain[0], domain[1], m),)
    return LRMesh(degree, domain, lines, tensor=(xk, yk))


def box_mesh(domain, segments, degree=(0, 0)) -> LRMesh:
    """General multiplicity-tagged box-mesh from explicit segments.

    ``segments`` are ``(axis, fixed, lo, hi, multiplicity)`` tuples.  Such a mesh
    need not have constant splits and carries no construction history.
    """
    domain = tuple(as_rational(v) for v in domain)
    lines = {}
    for axis, fixed, lo, hi, mult in segments:
        fixed, lo, hi = as_rational(fixed), as_rational(lo), as_rational(hi)
        key = (axis, fixed)
        pieces = lines.get(key, ())
        for a, b, _ in pieces:
            if a < hi and lo < b:
                raise InvalidBoxPartition(f"overlapping segments on line {key}")
        lines[key] = _merge(pieces + ((lo, hi, int(mult)),))
    _check_partition(domain, lines)
    return LRMesh(degree, domain, lines)


def insert_split(mesh: LRMesh, split: SplitSpec) -> LRMesh:
    """Insert ``split`` and return the refined mesh (the input is unchanged)."""
    k = split.axis
    a1, b1, a2, b2 = mesh.domain
    fixed_rng = (a1, b1) if k == VERTICAL else (a2, b2)
    run_rng = (a2, b2) if k == VERTICAL else (a1, b1)
    if not (fixed_rng[0] <= split.fixed <= fixed_rng[1]
            and run_rng[0] <= split.lo and split.hi <= run_rng[1]):
        raise DanglingSplit(f"{split} leaves the domain")
    for end in (split.lo, split.hi):
        if not contains_point(mesh.line(3 - k, end), split.fixed):
            raise DanglingSplit(f"{split} ends at {end} away from any orthogonal split")
    for el in mesh.elements:
        f_lo, f_hi = el.range(k)
        o_lo, o_hi = el.cross_range(k)
        if f_lo < split.fixed < f_hi and max(split.lo, o_lo) < min(split.hi, o_hi):
            if not (split.lo <= o_lo and o_hi <= split.hi):
                raise DanglingSplit(f"{split} ends inside element {el}")

    key = (k, split.fixed)
    pieces = _add_interval(mesh.line(*key), split.lo, split.hi, split.multiplicity)
    limit = own_degree(mesh.degree, k) + 1
    if any(m > limit for _, _, m in pieces):
        raise MultiplicityOverflow(f"{split} pushes a multiplicity above {limit}")
    for run in _runs(pieces):
        if len({m for _, _, m in run}) > 1:
            raise NonConstantSplitResult(f"{split} leaves a maximal split with mixed multiplicities")

    lines = dict(mesh.lines)
    lines[key] = pieces
    return LRMesh(mesh.degree, mesh.domain, lines, mesh.history + (split,),
                  tensor=mesh.tensor, previous=mesh)


def replay(initial: LRMesh, history) -> LRMesh:
    mesh = initial
    for split in history:
        mesh = insert_split(mesh, split)
    return mesh


def initial_mesh(mesh: LRMesh) -> LRMesh:
    """The tensor mesh at the start of the history."""
    if not mesh.is_lr:
        raise ValueError("mesh has no tensor origin")
    xk, yk = mesh.tensor
    return new_tensor_mesh(xk, yk, mesh.degree)


def mesh_before_last(mesh: LRMesh) -> LRMesh:
    if not mesh.history:
        raise ValueError("mesh has an empty history")
    if mesh.previous is not None:
        return mesh.previous
    return replay(initial_mesh(mesh), mesh.history[:-1])


# -- queries ---------------------------------------------------------------------

def elements(mesh: LRMesh):
    return list(mesh.elements)


def classify_vertices(mesh: LRMesh):
    return list(mesh.vertices)


def maximal_splits(mesh: LRMesh, axis):
    """Maximal splits along ``axis`` ordered by (fixed, lo).

    On a mesh with constant splits the multiplicity is the common one; on a
    general box-mesh it is the largest along the run.
    """
    out = []
    for (a, fixed), pieces in mesh.lines.items():
        if a != axis:
            continue
        for run in _runs(pieces):
            out.append(SplitSpec(axis, fixed, run[0][0], run[-1][1], max(m for _, _, m in run)))
    return out


def knot_vector_on_split(mesh: LRMesh, split: SplitSpec):
    """Crossing coordinates with orthogonal vertex multiplicities, and the length."""
    pieces = mesh.line(split.axis, split.fixed)
    if not covers(pieces, split.lo, split.hi):
        raise SplitNotInMesh(f"{split} is not made of meshlines of the mesh")
    vmap = mesh.vertex_map
    knots = []
    for c in mesh.cuts[(split.axis, split.fixed)]:
        if split.lo <= c <= split.hi:
            pos = (split.fixed, c) if split.axis == VERTICAL else (c, split.fixed)
            v = vmap[pos]
            knots.append((c, v.mu2 if split.axis == VERTICAL else v.mu1))
    return knots, sum(m for _, m in knots)


def split_length(mesh: LRMesh, split: SplitSpec) -> int:
    return knot_vector_on_split(mesh, split)[1]


def _crossing_mult(mesh, axis, fixed, c):
    pos = (fixed, c) if axis == VERTICAL else (c, fixed)
    v = mesh.vertex_map[pos]
    return v.mu2 if axis == VERTICAL else v.mu1


def expanded_split(mesh_after: LRMesh, split: SplitSpec, degree=None) -> SplitSpec:
    """Extend ``split`` into the colinear splits it prolongs.

    At each end where the mesh before insertion already continued the line,
    the split grows into the old split until the old part holds ``q+1`` knots
    counted with multiplicity, the joint included (q the degree across the
    split), or up to the end of the old split if that comes first.  With every
    multiplicity 1 this is ``q`` meshlines.
    """
    return _expand(mesh_after, split, degree)[0]


def expanded_knot_vector(mesh_after: LRMesh, split: SplitSpec, degree=None):
    """Knot vector on the expanded split, borrowed end knots clipped to ``q+1``.

    Returns ``(expanded, knots, length)``; ``length - q - 1`` is the dimension gain.
    """
    expanded, clip_lo, clip_hi = _expand(mesh_after, split, degree)
    knots, _ = knot_vector_on_split(mesh_after, expanded)
    if clip_lo:
        knots[0] = (knots[0][0], knots[0][1] - clip_lo)
    if clip_hi:
        knots[-1] = (knots[-1][0], knots[-1][1] - clip_hi)
    knots = [(t, m) for t, m in knots if m > 0]
    return expanded, knots, sum(m for _, m in knots)


def _expand(mesh_after, split, degree):
    degree = tuple(degree) if degree is not None else mesh_after.degree
    before = mesh_before_last(mesh_after)
    old = before.line(split.axis, split.fixed)
    need = cross_degree(degree, split.axis)
    atoms = mesh_after.atoms_on(split.axis, split.fixed)
    ups = {m.lo: m.hi for m in atoms}
    downs = {m.hi: m.lo for m in atoms}

    def walk(end, step):
        got = _crossing_mult(mesh_after, split.axis, split.fixed, end)
        while got < need + 1 and end in step:
            end = step[end]
            got += _crossing_mult(mesh_after, split.axis, split.fixed, end)
        return end, max(got - need - 1, 0)

    lo, hi, clip_lo, clip_hi = split.lo, split.hi, 0, 0
    if any(a <= split.hi < b for a, b, _ in old):
        hi, clip_hi = walk(hi, ups)
    if any(a < split.lo <= b for a, b, _ in old):
        lo, clip_lo = walk(lo, downs)
    return split.with_span(lo, hi), clip_lo, clip_hi


def validate_lr_rules(mesh: LRMesh):
    """Replay the history and report every LR-rule violation as data."""
    if not mesh.is_lr:
        return [Violation(0, None, None, None, None, "mesh has no tensor origin")]
    p1, p2 = mesh.degree
    xk, yk = mesh.tensor
    out = []
    nx = sum(m for _, m in xk)
    ny = sum(m for _, m in yk)
    if nx < p1 + 2:
        out.append(Violation(1, None, None, nx, p1 + 2,
                             f"initial mesh has {nx} vertical lines counting multiplicity, needs {p1 + 2}"))
    if ny < p2 + 2:
        out.append(Violation(1, None, None, ny, p2 + 2,
                             f"initial mesh has {ny} horizontal lines counting multiplicity, needs {p2 + 2}"))
    state = initial_mesh(mesh)
    for step, split in enumerate(mesh.history):
        state = insert_split(state, split)
        for axis in (VERTICAL, HORIZONTAL):
            need = cross_degree(mesh.degree, axis) + 2
            for ms in maximal_splits(state, axis):
                length = split_length(state, ms)
                if length < need:
                    out.append(Violation(2, step, ms, length, need,
                                         f"after step {step} maximal split {_fmt_split(ms)} "
                                         f"has length {length} < {need}"))
    return out


def _fmt_split(s: SplitSpec) -> str:
    tag = "x" if s.axis == VERTICAL else "y"
    return f"{tag}={s.fixed} over [{s.lo}, {s.hi}] mult {s.multiplicity}"
