"""Exact linear dependence detection, circuits, peeling and necessary conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bspline import bezier_coefficients, splits_of
from .errors import NotADependence
from .linalg import echelon_of
from .mesh import HORIZONTAL, VERTICAL, LRMesh

INDEPENDENT = "Independent"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ElementMatrix:
    elements: tuple
    row_labels: tuple  # (element index, i, j)
    columns: tuple  # the B-splines
    rows: tuple

    def column(self, k):
        return [row[k] for row in self.rows]

    def restricted(self, cols):
        cols = list(cols)
        return [[row[c] for c in cols] for row in self.rows]


@dataclass(frozen=True)
class Check:
    passed: bool
    details: tuple = ()
    failures: tuple = ()


@dataclass(frozen=True)
class Diagnostics:
    nestedness: Check
    meshline_share: Check
    t_vertices: Check

    @property
    def passed(self) -> bool:
        return self.nestedness.passed and self.meshline_share.passed and self.t_vertices.passed


@dataclass(frozen=True)
class DependenceReport:
    rank: int
    nullity: int
    null_basis: tuple
    active_set: tuple
    circuit: tuple | None = None
    coefficients: tuple | None = None
    diagnostics: Diagnostics | None = None
    members: tuple = field(default=(), repr=False)

    @property
    def independent(self) -> bool:
        return self.nullity == 0

    def circuit_bsplines(self):
        return [self.members[i] for i in self.circuit] if self.circuit else []


@dataclass(frozen=True)
class OverloadCounts:
    counts: dict
    overloaded_elements: frozenset
    overloaded_bsplines: frozenset


@dataclass(frozen=True)
class PeelReport:
    overloaded_elements: frozenset
    overloaded_bsplines: frozenset
    rounds: tuple
    verdict: str
    improved_used: bool


def _inside(el, B) -> bool:
    x0, x1, y0, y1 = B.support
    return x0 <= el.x_lo and el.x_hi <= x1 and y0 <= el.y_lo and el.y_hi <= y1


def elements_of(B, mesh):
    return [el for el in mesh.elements if _inside(el, B)]


# -- element matrix ---------------------------------------------------------------

def assemble_element_matrix(bsplines, mesh: LRMesh) -> ElementMatrix:
    """Unweighted Bernstein coefficients of each B-spline on every covered element."""
    bsplines = tuple(bsplines)
    if bsplines:
        p1, p2 = bsplines[0].degree
    els = tuple(el for el in mesh.elements if any(_inside(el, B) for B in bsplines))
    labels = []
    rows = []
    for e, el in enumerate(els):
        block = []
        for B in bsplines:
            if _inside(el, B):
                bx = bezier_coefficients(B.xknots, p1, el.x_lo, el.x_hi)
                by = bezier_coefficients(B.yknots, p2, el.y_lo, el.y_hi)
                block.append((bx, by))
            else:
                block.append(None)
        for i in range(p1 + 1):
            for j in range(p2 + 1):
                labels.append((e, i, j))
                rows.append(tuple(Fraction(0) if b is None else b[0][i] * b[1][j] for b in block))
    return ElementMatrix(els, tuple(labels), bsplines, tuple(rows))


def collection_matrix(coll) -> ElementMatrix:
    return assemble_element_matrix(coll.bsplines, coll.mesh)


def null_space(m: ElementMatrix):
    return echelon_of(m.rows, len(m.columns), stop_at_full=True).null_space()


def _nullity(m: ElementMatrix, cols) -> int:
    cols = list(cols)
    rows = [[row[c] for c in cols] for row in m.rows]
    return len(cols) - echelon_of(rows, len(cols)).rank


def extract_circuit(m: ElementMatrix, active):
    """Greedy minimal dependent subset of ``active`` with its coefficients."""
    cols = sorted(active)
    for c in list(cols):
        trial = [k for k in cols if k != c]
        if trial and _nullity(m, trial) >= 1:
            cols = trial
    rows = [[row[c] for c in cols] for row in m.rows]
    basis = echelon_of(rows, len(cols)).null_space()
    if len(basis) != 1 or any(v == 0 for v in basis[0]):
        raise NotADependence("greedy reduction did not end on a circuit")
    return tuple(cols), tuple(basis[0])


def check_combination(bsplines, coefficients, mesh) -> bool:
    """True when sum(alpha_i B_i) has all-zero Bernstein coefficients on every element."""
    region = [el for el in mesh.elements if any(_inside(el, B) for B in bsplines)]
    for el in region:
        total = None
        for B, a in zip(bsplines, coefficients):
            if not _inside(el, B):
                continue
            p1, p2 = B.degree
            bx = bezier_coefficients(B.xknots, p1, el.x_lo, el.x_hi)
            by = bezier_coefficients(B.yknots, p2, el.y_lo, el.y_hi)
            block = [a * u * v for u in bx for v in by]
            total = block if total is None else [s + t for s, t in zip(total, block)]
        if total is not None and any(total):
            return False
    return True


def find_active_dependence(coll, diagnose=True) -> DependenceReport:
    m = collection_matrix(coll)
    ech = echelon_of(m.rows, len(m.columns))
    basis = ech.null_space()
    n = len(m.columns)
    active = tuple(sorted({k for v in basis for k in range(n) if v[k]}))
    if not basis:
        return DependenceReport(ech.rank, 0, (), (), members=coll.bsplines)
    circuit, coeffs = extract_circuit(m, active)
    members = [coll.bsplines[k] for k in circuit]
    if not check_combination(members, coeffs, coll.mesh):
        raise NotADependence("circuit combination does not vanish")
    diag = verify_dependence_conditions(members, coll.mesh, coeffs) if diagnose else None
    return DependenceReport(ech.rank, n - ech.rank, tuple(tuple(v) for v in basis), active,
                            circuit, coeffs, diag, coll.bsplines)


# -- necessary conditions ---------------------------------------------------------------

_QUADRANTS = ("NE", "NW", "SE", "SW")


def _covers_quadrant(B, x, y, q) -> bool:
    x0, x1, y0, y1 = B.support
    okx = x0 <= x < x1 if q[1] == "E" else x0 < x <= x1
    oky = y0 <= y < y1 if q[0] == "N" else y0 < y <= y1
    return okx and oky


def _quadrants(members, x, y):
    return {q for q in _QUADRANTS if any(_covers_quadrant(B, x, y, q) for B in members)}


def _knot_pairs(B):
    return {(x, y) for x in set(B.xknots) for y in set(B.yknots)}


def _relevant_atoms(members, mesh):
    """Mesh meshlines lying in splits of the members, with the members using each."""
    owners = {}
    for k, B in enumerate(members):
        for s in splits_of(B):
            for atom in mesh.atoms_on(s.axis, s.fixed):
                if s.lo <= atom.lo and atom.hi <= s.hi:
                    owners.setdefault(atom, set()).add(k)
    return owners


def _nestedness(members):
    corners = {(c[0], c[1]) for B in members for c in
               ((B.support[0], B.support[2]), (B.support[0], B.support[3]),
                (B.support[1], B.support[2]), (B.support[1], B.support[3]))}
    details, failures = [], []
    for x, y in sorted(corners):
        quads = _quadrants(members, x, y)
        if len(quads) != 1:
            continue
        q = quads.pop()
        at_corner = [k for k, B in enumerate(members) if _covers_quadrant(B, x, y, q)]

        def extent(k):
            x0, x1, y0, y1 = members[k].support
            return (x1 - x if q[1] == "E" else x - x0, y1 - y if q[0] == "N" else y - y0)

        dx = min(extent(k)[0] for k in at_corner)
        dy = min(extent(k)[1] for k in at_corner)
        smallest = [k for k in at_corner if extent(k) == (dx, dy)]
        larger = [k for k in at_corner if extent(k)[0] > dx and extent(k)[1] > dy]
        entry = ((x, y), q, tuple(smallest), tuple(larger))
        details.append(entry)
        if len(smallest) != 1 or not larger:
            failures.append(entry)
    return Check(not failures, tuple(details), tuple(failures))


def _arms(owners, x, y):
    arms = set()
    for atom in owners:
        if atom.axis == VERTICAL and atom.fixed == x:
            if atom.lo == y:
                arms.add("up")
            if atom.hi == y:
                arms.add("down")
        elif atom.axis == HORIZONTAL and atom.fixed == y:
            if atom.lo == x:
                arms.add("right")
            if atom.hi == x:
                arms.add("left")
    return arms


_STEM = {"up": "down", "down": "up", "left": "right", "right": "left"}


def _t_vertices(members, owners):
    pairs = {}
    for k, B in enumerate(members):
        for v in _knot_pairs(B):
            pairs.setdefault(v, set()).add(k)
    details, failures = [], []
    for (x, y), who in sorted(pairs.items()):
        if len(_quadrants(members, x, y)) != 4:
            continue
        arms = _arms(owners, x, y)
        if len(arms) != 3:
            continue
        missing = ({"up", "down", "left", "right"} - arms).pop()
        entry = ((x, y), "T-" + _STEM[missing], tuple(sorted(who)))
        details.append(entry)
        if len(who) < 2:
            failures.append(entry)
    return Check(not failures, tuple(details), tuple(failures))


def verify_dependence_conditions(circuit, mesh: LRMesh, coefficients=None) -> Diagnostics:
    """Check the necessary conditions a dependence relation must satisfy.

    ``coefficients`` are checked to give a vanishing combination; when omitted,
    the members must carry a one-dimensional null space with no zero entry.
    """
    members = list(circuit)
    if coefficients is None:
        m = assemble_element_matrix(members, mesh)
        basis = null_space(m)
        if len(basis) != 1 or any(v == 0 for v in basis[0]):
            raise NotADependence("the members do not form an active dependence")
    elif any(a == 0 for a in coefficients) or not check_combination(members, coefficients, mesh):
        raise NotADependence("the given combination does not vanish on every element")
    owners = _relevant_atoms(members, mesh)
    share_details = tuple((atom, tuple(sorted(who))) for atom, who in sorted(owners.items()))
    share_fail = tuple(d for d in share_details if len(d[1]) < 2)
    return Diagnostics(
        _nestedness(members),
        Check(not share_fail, share_details, share_fail),
        _t_vertices(members, owners),
    )


# -- peeling --------------------------------------------------------------------------------

def _local_capacity(covering, el):
    """Rank of the restrictions of ``covering`` to ``el``."""
    p1, p2 = covering[0].degree
    rows = []
    for B in covering:
        bx = bezier_coefficients(B.xknots, p1, el.x_lo, el.x_hi)
        by = bezier_coefficients(B.yknots, p2, el.y_lo, el.y_hi)
        rows.append([u * v for u in bx for v in by])
    return echelon_of(rows, (p1 + 1) * (p2 + 1)).rank


def overload_counts(coll, members=None) -> OverloadCounts:
    """Cover counts per element; ``members`` restricts which B-splines are counted.

    An element is overloaded when more B-splines cover it than the dimension
    their restrictions span there.  Where the restrictions reach the full
    bi-polynomial space this is the usual ``count > (p1+1)(p2+1)`` test; near a
    boundary with low multiplicity it is strictly sharper and keeps peeling sound.
    """
    mesh = coll.mesh
    pool = list(coll.bsplines if members is None else members)
    p1, p2 = mesh.degree
    limit = (p1 + 1) * (p2 + 1)
    supports = {B.key: elements_of(B, mesh) for B in pool}
    covering = {el: [] for el in mesh.elements}
    for B in pool:
        for el in supports[B.key]:
            covering[el].append(B)
    counts = {el: len(bs) for el, bs in covering.items()}
    over_el = frozenset(
        el for el, bs in covering.items()
        if len(bs) > limit or (len(bs) > 1 and len(bs) > _local_capacity(bs, el)))
    over_b = frozenset(B for B in pool if all(el in over_el for el in supports[B.key]))
    return OverloadCounts(counts, over_el, over_b)


def _exclusive_t_owners(current, mesh):
    """Members of ``current`` owning a mesh T-vertex as a knot pair no other member owns."""
    t_points = {v.position for v in mesh.vertices if v.kind.startswith("T-")}
    owners = {}
    for B in current:
        for v in _knot_pairs(B) & t_points:
            owners.setdefault(v, set()).add(B)
    return {next(iter(who)) for who in owners.values() if len(who) == 1}


def peel(coll, improved=False, start=None) -> PeelReport:
    """Iteratively discard members of the overloaded set that cannot be active.

    ``start`` replaces the computed overloaded set with a designated one, which
    lets a worked example begin from a hand-picked candidate set.
    """
    mesh = coll.mesh
    base = overload_counts(coll)
    if start is not None:
        keys = {B.key for B in start}
        chosen = frozenset(B for B in coll.bsplines if B.key in keys)
        if len(chosen) != len(keys):
            raise ValueError("start set must be drawn from the collection")
        over_el = frozenset(el for B in chosen for el in elements_of(B, mesh))
        base = OverloadCounts(base.counts, over_el, chosen)
    current = set(base.overloaded_bsplines)
    rounds = []
    while True:
        cover = {}
        for B in current:
            for el in elements_of(B, mesh):
                cover.setdefault(el, []).append(B)
        removable = {bs[0] for bs in cover.values() if len(bs) == 1}
        if improved:
            removable |= _exclusive_t_owners(current, mesh)
        if not current - removable:
            if removable:
                rounds.append(frozenset(removable))
            verdict = INDEPENDENT
            break
        if not removable:
            verdict = INCONCLUSIVE
            break
        rounds.append(frozenset(removable))
        current -= removable
    return PeelReport(base.overloaded_elements, base.overloaded_bsplines, tuple(rounds),
                      verdict, improved)
