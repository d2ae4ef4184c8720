"""Built-in meshes with fixed rational coordinates.

Only the incidence structure of each mesh matters for dimensions and
dependence, so every coordinate below is a simple rational picked once.
Each builder records which B-splines it highlights (a known circuit, the
supports of a figure), the split about to be inserted for hand-in-hand cases,
and for the peeling example the designated starting set of candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bspline import TensorBSpline
from .errors import UnknownScenario
from .mesh import HORIZONTAL, VERTICAL, LRMesh, SplitSpec, box_mesh, insert_split, new_tensor_mesh


@dataclass(frozen=True)
class Scenario:
    name: str
    caption: str
    mesh: LRMesh
    highlight: tuple = ()
    pending: SplitSpec | None = None
    candidates: tuple | None = None

    @property
    def is_lr(self) -> bool:
        return self.mesh.is_lr


def _q(value) -> Fraction:
    return Fraction(value)


def _h(y, lo, hi, mult=1):
    return SplitSpec(HORIZONTAL, _q(y), _q(lo), _q(hi), mult)


def _v(x, lo, hi, mult=1):
    return SplitSpec(VERTICAL, _q(x), _q(lo), _q(hi), mult)


def _grid(n, den, shift=0):
    return [Fraction(i, den) + shift for i in range(n + 1)]


def _tensor(xs, ys, degree, steps=()):
    mesh = new_tensor_mesh([(x, 1) for x in xs], [(y, 1) for y in ys], degree)
    for s in steps:
        mesh = insert_split(mesh, s)
    return mesh


def _b(degree, xs, ys):
    return TensorBSpline(degree, [_q(t) for t in xs], [_q(t) for t in ys])


def _bs(degree, rows):
    return tuple(_b(degree, xs.split(), ys.split()) for xs, ys in (r.split(";") for r in rows))


# -- multiplicity-1 dependence meshes ------------------------------------------------

_FIG7A_STEPS = (_h("5/9", 0, "3/4"), _h("4/9", "1/2", "5/4"), _v("5/8", 0, "2/3"), _v("11/16", "1/3", 1))


def _fig7a(degree=(2, 2)):
    return _tensor(_grid(5, 4), _grid(3, 3), degree, _FIG7A_STEPS)


def fig7a():
    circuit = _bs((2, 2), [
        "1/4 1/2 5/8 3/4 ; 0 1/3 5/9 2/3",
        "1/4 1/2 3/4 1 ; 0 1/3 2/3 1",
        "1/2 5/8 3/4 1 ; 0 1/3 4/9 2/3",
        "1/4 1/2 11/16 3/4 ; 1/3 5/9 2/3 1",
        "1/2 5/8 11/16 3/4 ; 1/3 4/9 5/9 2/3",
        "1/2 11/16 3/4 1 ; 1/3 4/9 2/3 1",
    ])
    return Scenario("fig7a", "LR-mesh of multiplicity 1 with 10 MS and 9 LR B-splines; "
                    "highlight: the six-member MS circuit", _fig7a(), circuit)


def fig8lr():
    mesh = insert_split(_fig7a(), _v("9/16", "1/3", 1))
    circuit = _bs((2, 2), [
        "1/4 1/2 3/4 1 ; 0 1/3 2/3 1",
        "1/4 1/2 5/8 3/4 ; 0 1/3 5/9 2/3",
        "1/2 5/8 3/4 1 ; 0 1/3 4/9 2/3",
        "1/2 9/16 11/16 3/4 ; 4/9 5/9 2/3 1",
        "1/4 1/2 9/16 11/16 ; 1/3 5/9 2/3 1",
        "1/2 9/16 5/8 11/16 ; 1/3 4/9 5/9 2/3",
        "9/16 5/8 11/16 3/4 ; 1/3 4/9 5/9 2/3",
        "9/16 11/16 3/4 1 ; 1/3 4/9 2/3 1",
    ])
    return Scenario("fig8lr", "fig7a plus a vertical split of length 5: 12 LR B-splines, dim 11; "
                    "highlight: the eight-member LR circuit", mesh, circuit)


def figpe():
    steps = (_h("7/10", 0, "3/5"), _v("3/10", 0, "7/10"), _h("3/10", "3/10", 1),
             _v("7/10", "3/10", 1), _h("7/10", "3/5", "7/10"))
    mesh = _tensor(_grid(5, 5), _grid(5, 5), (2, 2), steps)
    candidates = _bs((2, 2), [
        "1/5 3/10 2/5 3/5 ; 1/5 2/5 3/5 7/10",
        "3/10 2/5 3/5 4/5 ; 1/5 3/10 2/5 3/5",
        "2/5 3/5 7/10 4/5 ; 3/10 2/5 3/5 4/5",
        "1/5 2/5 3/5 7/10 ; 2/5 3/5 7/10 4/5",
        "1/5 2/5 3/5 4/5 ; 1/5 2/5 3/5 4/5",
    ])
    return Scenario("figpe", "pinwheel of four T-vertices; the last step extends the first "
                    "split so the pinwheel is an LR-mesh; highlight: the candidate set "
                    "for peeling", mesh, candidates, candidates=candidates)


def fig15a():
    third, two = Fraction(1, 3), Fraction(2, 3)
    segs = [(VERTICAL, x, 0, 1, 1) for x in (0, third, two, 1)]
    segs += [(HORIZONTAL, y, 0, 1, 1) for y in (0, third, two, 1)]
    segs += [
        (VERTICAL, Fraction(4, 9), 0, two, 1), (VERTICAL, Fraction(5, 9), third, 1, 1),
        (HORIZONTAL, Fraction(5, 9), 0, two, 1), (HORIZONTAL, Fraction(4, 9), third, 1, 1),
        (VERTICAL, Fraction(1, 6), 0, Fraction(5, 9), 1),
        (HORIZONTAL, Fraction(5, 6), Fraction(5, 9), 1, 1),
        (HORIZONTAL, Fraction(1, 6), Fraction(5, 6), 1, 1),
        (VERTICAL, Fraction(5, 6), 0, Fraction(4, 9), 1),
    ]
    six = _bs((2, 2), [
        "0 1/3 5/9 2/3 ; 1/3 5/9 2/3 1",
        "1/3 5/9 2/3 1 ; 1/3 4/9 2/3 1",
        "0 1/3 4/9 2/3 ; 0 1/3 5/9 2/3",
        "1/3 4/9 2/3 1 ; 0 1/3 4/9 2/3",
        "1/3 4/9 5/9 2/3 ; 1/3 4/9 5/9 2/3",
        "0 1/3 2/3 1 ; 0 1/3 2/3 1",
    ])
    return Scenario("fig15a", "dependence region as a box-mesh (short filler splits, "
                    "not an LR-mesh); highlight: its six MS B-splines",
                    box_mesh((0, 1, 0, 1), segs, (2, 2)), six)


# -- hand in hand -------------------------------------------------------------------------

_HH1_STEPS = (_h("7/9", 0, "3/4"), _h("4/9", "1/2", "5/4"))


def _hh1(extra=()):
    return _tensor(_grid(5, 4), _grid(3, 3), (2, 2), _HH1_STEPS + tuple(extra))


def hh1a():
    return Scenario("hh1a", "a length-4 split that creates no new B-spline",
                    _hh1(), pending=_v("5/8", "1/3", "7/9"))


def hh1b():
    return Scenario("hh1b", "hh1a after extending a split by one meshline: MS-wise only",
                    _hh1([_h("7/9", "3/4", 1)]), pending=_v("5/8", "1/3", "7/9"))


def hh1e():
    return Scenario("hh1e", "hh1a with the new split one meshline longer: LR-wise",
                    _hh1(), pending=_v("5/8", "1/3", 1))


def hh5():
    steps = (_v("1/8", "1/4", 1), _h("7/16", "1/4", 1), _h("5/16", "1/4", 1),
             _v("1/3", "1/4", "1/2"), _v("5/12", "1/4", "1/2"))
    mesh = _tensor(_grid(5, 4, Fraction(-1, 4)), _grid(4, 4), (2, 2), steps)
    return Scenario("hh5", "length-7 split with five crossing B-splines but rank-3 restrictions",
                    mesh, pending=_h("3/8", "-1/4", "1/2"))


# -- other bidegrees -------------------------------------------------------------------------

def _deg34(degree):
    if degree in ((3, 3), (3, 1)):
        ys = _grid(4, 4) if degree == (3, 3) else _grid(2, 2)
        hi, lo = ("5/8", "3/8") if degree == (3, 3) else ("3/4", "1/4")
        steps = (_h(hi, 0, 1), _h(lo, "1/2", "3/2"), _v("5/8", "1/4", 1), _v("7/8", 0, "3/4"))
        return _tensor(_grid(6, 4), ys, degree, steps)
    if degree == (4, 4):
        steps = (_h("7/10", 0, 1), _h("3/10", "2/5", "7/5"), _v("1/2", "1/5", 1), _v("9/10", 0, "4/5"))
        return _tensor(_grid(7, 5), _grid(5, 5), degree, steps)
    if degree in ((1, 1), (1, 0)):
        ys = [0, Fraction(3, 10), Fraction(3, 5)] if degree == (1, 1) else [0, Fraction(3, 5)]
        steps = (_h("9/20", 0, "2/5"), _h("3/20", "2/5", "4/5"), _v("3/10", 0, "9/20"),
                 _v("1/2", "3/20", "3/5"), _h("9/20", "2/5", "1/2"), _h("3/20", "3/10", "2/5"))
        return _tensor(_grid(4, 5), ys, degree, steps)
    raise UnknownScenario(f"no MS family member for bidegree {degree}")


def _deg34lr(degree):
    if degree in ((3, 3), (3, 1)):
        ys = _grid(4, 4) if degree == (3, 3) else _grid(2, 2)
        hi, lo = ("5/8", "3/8") if degree == (3, 3) else ("3/4", "1/4")
        steps = (_h(hi, 0, 1), _h(lo, "1/2", "3/2"), _v("5/8", "1/4", 1), _v("5/6", 0, "3/4"),
                 _v("11/12", "1/4", 1))
        return _tensor(_grid(6, 4), ys, degree, steps)
    if degree == (4, 4):
        return insert_split(_deg34((4, 4)), _v("7/10", "1/5", 1))
    if degree == (2, 0):
        steps = (_h("3/5", 0, "3/4"), _h("1/5", "1/2", "5/4"), _v("5/8", 0, "3/5"),
                 _v("11/16", "1/5", "4/5"), _v("9/16", "1/5", "4/5"))
        return _tensor(_grid(5, 4), [0, Fraction(4, 5)], degree, steps)
    raise UnknownScenario(f"no LR family member for bidegree {degree}")


DEG34_MS = ((3, 3), (4, 4), (1, 1), (1, 0), (3, 1))
DEG34_LR = ((3, 3), (4, 4), (3, 1), (2, 0))


def _family(prefix, build, degrees, caption):
    out = {}
    for d in degrees:
        name = f"{prefix}-{d[0]}{d[1]}"
        out[name] = (lambda d=d, name=name: Scenario(name, caption.format(d=d), build(d)))
    return out


# -- general box-meshes -----------------------------------------------------------------------

def fig2():
    a, b = Fraction(1, 3), Fraction(2, 3)
    half, wide = Fraction(1, 2), Fraction(3, 2)
    segs = [
        (HORIZONTAL, 0, 0, half, 1), (HORIZONTAL, 0, half, wide, 2), (HORIZONTAL, 1, 0, wide, 1),
        (VERTICAL, 0, 0, 1, 1), (VERTICAL, wide, 0, 1, 1),
        (HORIZONTAL, b, 0, half, 1), (HORIZONTAL, b, half, wide, 2),
        (HORIZONTAL, a, half, 1, 4),
        (VERTICAL, half, 0, a, 1), (VERTICAL, half, a, b, 3), (VERTICAL, half, b, 1, 1),
        (VERTICAL, 1, 0, b, 1),
    ]
    return Scenario("fig2", "box-partition with six elements and per-meshline multiplicities 1 to 4",
                    box_mesh((0, wide, 0, 1), segs, (3, 3)))


def fig5():
    half, wide = Fraction(1, 2), Fraction(3, 2)
    segs = [
        (HORIZONTAL, 0, 0, wide, 1), (HORIZONTAL, 1, 0, wide, 1),
        (VERTICAL, 0, 0, 1, 1), (VERTICAL, wide, 0, 1, 1),
        (HORIZONTAL, half, 0, half, 1), (HORIZONTAL, half, half, wide, 2),
        (VERTICAL, half, 0, 1, 1), (VERTICAL, 1, half, 1, 1),
    ]
    return Scenario("fig5", "vertex multiplicities taken as the maximum over incident meshlines",
                    box_mesh((0, wide, 0, 1), segs, (2, 2)))


def fig6():
    f = Fraction
    segs = [(VERTICAL, x, 0, 1, 1) for x in (0, f(3, 5), f(4, 5), 1)]
    segs += [(HORIZONTAL, y, 0, 1, 1) for y in (0, f(1, 5), f(4, 5), 1)]
    segs += [
        (HORIZONTAL, f(3, 5), 0, f(4, 5), 1), (VERTICAL, f(1, 5), f(1, 5), 1, 1),
        (HORIZONTAL, f(7, 10), 0, f(3, 5), 1), (VERTICAL, f(2, 5), 0, f(4, 5), 1),
        (VERTICAL, f(1, 2), f(1, 5), 1, 1),
    ]
    three = _bs((2, 2), [
        "0 2/5 3/5 4/5 ; 0 1/5 3/5 4/5",
        "0 3/5 4/5 1 ; 0 1/5 4/5 1",
        "0 1/5 1/2 3/5 ; 1/5 3/5 4/5 1",
    ])
    return Scenario("fig6", "two minimal supports and one traversed by an extra horizontal split",
                    box_mesh((0, 1, 0, 1), segs, (2, 2)), three)


_BUILDERS = {
    "fig7a": fig7a, "fig8lr": fig8lr, "figpe": figpe, "fig15a": fig15a,
    "hh1a": hh1a, "hh1b": hh1b, "hh1e": hh1e, "hh5": hh5,
    "fig2": fig2, "fig5": fig5, "fig6": fig6,
}
_BUILDERS.update(_family("deg34", _deg34, DEG34_MS,
                         "bidegree {d}: dim 9 with 10 MS B-splines and a six-member circuit"))
_BUILDERS.update(_family("deg34lr", _deg34lr, DEG34_LR,
                         "bidegree {d}: dim 11 with 12 LR B-splines and an eight-member circuit"))

NAMES = tuple(_BUILDERS)


def scenario(name: str) -> Scenario:
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {', '.join(NAMES)}") from None
    return build()


def builtin_scenario(name: str) -> LRMesh:
    return scenario(name).mesh


def lr_scenarios():
    """Names of the scenarios built as LR-meshes from a tensor mesh."""
    return tuple(n for n in NAMES if scenario(n).is_lr)
