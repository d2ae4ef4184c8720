"""Univariate and tensor-product B-splines with exact knot insertion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BadKnotCount,
    ElementStraddlesSupportBoundaryImproperly,
    KnotOutOfInterior,
    SplitDoesNotTraverse,
)
from .mesh import HORIZONTAL, VERTICAL, SplitSpec, as_rational, covers, multiplicity_over

MINIMAL = "MinimalSupport"
NOT_MINIMAL = "SupportNotMinimal"
NO_SUPPORT = "NoSupport"


def knot_tuple(knots):
    kv = tuple(as_rational(t) for t in knots)
    if any(a > b for a, b in zip(kv, kv[1:])):
        raise ValueError(f"knot vector {kv} is not nondecreasing")
    return kv


def multiplicities(kv):
    """Dual view of a knot vector: list of (value, multiplicity)."""
    out = []
    for t in kv:
        if out and out[-1][0] == t:
            out[-1] = (t, out[-1][1] + 1)
        else:
            out.append((t, 1))
    return out


def expand(knots):
    """Inverse of :func:`multiplicities`."""
    return tuple(t for t, m in knots for _ in range(m))


def _ratio(num, den):
    return Fraction(0) if den == 0 else num / den


def eval_univariate(kv, p, t, from_left=False) -> Fraction:
    """Cox-de Boor value of the B-spline on ``kv`` (length p+2) at ``t``.

    Degree-0 pieces are half-open ``[t_i, t_{i+1})``; ``from_left`` switches to
    ``(t_i, t_{i+1}]``, which gives the closed last element at a domain's end.
    """
    kv = tuple(kv)
    if len(kv) != p + 2:
        raise BadKnotCount(f"expected {p + 2} knots, got {len(kv)}")
    t = as_rational(t)
    if t < kv[0] or t > kv[-1]:
        return Fraction(0)
    if from_left:
        vals = [Fraction(int(a < t <= b)) for a, b in zip(kv, kv[1:])]
    else:
        vals = [Fraction(int(a <= t < b)) for a, b in zip(kv, kv[1:])]
    for d in range(1, p + 1):
        vals = [
            _ratio(t - kv[i], kv[i + d] - kv[i]) * vals[i]
            + _ratio(kv[i + d + 1] - t, kv[i + d + 1] - kv[i + 1]) * vals[i + 1]
            for i in range(len(vals) - 1)
        ]
    return vals[0]


def insert_knot(kv, p, t_hat):
    """Split B[kv] into two B-splines on kv with ``t_hat`` added.

    Returns ``(left, alpha1, right, alpha2)`` with
    ``B[kv] = alpha1 * B[left] + alpha2 * B[right]``.
    """
    kv = tuple(as_rational(t) for t in kv)
    if len(kv) != p + 2:
        raise BadKnotCount(f"expected {p + 2} knots, got {len(kv)}")
    t_hat = as_rational(t_hat)
    if not kv[0] < t_hat < kv[-1]:
        raise KnotOutOfInterior(f"{t_hat} is not inside ({kv[0]}, {kv[-1]})")
    merged = tuple(sorted(kv + (t_hat,)))
    alpha1 = Fraction(1) if t_hat >= kv[p] else (t_hat - kv[0]) / (kv[p] - kv[0])
    alpha2 = Fraction(1) if t_hat <= kv[1] else (kv[p + 1] - t_hat) / (kv[p + 1] - kv[1])
    return merged[:p + 2], alpha1, merged[1:], alpha2


def refine(kv, p, insertions):
    """Express B[kv] over a finer knot set.

    ``insertions`` is a multiset of knots; each copy is inserted into every
    current piece whose open support contains it.  Returns a dict
    ``window -> coefficient``.
    """
    pieces = {tuple(kv): Fraction(1)}
    for t in sorted(insertions):
        nxt = {}
        for w, c in pieces.items():
            if w[0] < t < w[-1]:
                left, a1, right, a2 = insert_knot(w, p, t)
                if a1:
                    nxt[left] = nxt.get(left, 0) + a1 * c
                if a2:
                    nxt[right] = nxt.get(right, 0) + a2 * c
            else:
                nxt[w] = nxt.get(w, 0) + c
        pieces = {w: c for w, c in nxt.items() if c}
    return pieces


@lru_cache(maxsize=65536)
def bezier_coefficients(kv, p, a, c):
    """Bernstein coefficients of B[kv] on [a, c], a span of the knot vector.

    Both ends are raised to multiplicity p+1 by knot insertion; the pieces
    supported exactly on [a, c] are then the Bernstein polynomials.
    """
    if c <= kv[0] or a >= kv[-1]:
        return (Fraction(0),) * (p + 1)
    if a < kv[0] or c > kv[-1] or any(a < t < c for t in kv):
        raise ElementStraddlesSupportBoundaryImproperly(
            f"[{a}, {c}] is not a knot span of {kv}")
    extra = []
    for t in (a, c):
        if kv[0] < t < kv[-1]:
            extra += [t] * (p + 1 - kv.count(t))
    coeffs = [Fraction(0)] * (p + 1)
    for w, value in refine(kv, p, extra).items():
        if w[0] == a and w[-1] == c:
            coeffs[w.count(c) - 1] += value
    return tuple(coeffs)


@dataclass(frozen=True)
class TensorBSpline:
    degree: tuple
    xknots: tuple
    yknots: tuple
    weight: Fraction = field(default=Fraction(1), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "degree", tuple(self.degree))
        object.__setattr__(self, "xknots", knot_tuple(self.xknots))
        object.__setattr__(self, "yknots", knot_tuple(self.yknots))
        object.__setattr__(self, "weight", as_rational(self.weight))
        p1, p2 = self.degree
        if len(self.xknots) != p1 + 2 or len(self.yknots) != p2 + 2:
            raise BadKnotCount("knot vectors must have p+2 entries")
        if self.xknots[0] == self.xknots[-1] or self.yknots[0] == self.yknots[-1]:
            raise ValueError("B-spline support must have nonempty interior")

    @property
    def key(self):
        return (self.xknots, self.yknots)

    @property
    def support(self):
        return (self.xknots[0], self.xknots[-1], self.yknots[0], self.yknots[-1])

    def knots(self, axis):
        """Knots carried by ``axis`` lines: x for vertical, y for horizontal."""
        return self.xknots if axis == VERTICAL else self.yknots

    def with_weight(self, weight) -> "TensorBSpline":
        return TensorBSpline(self.degree, self.xknots, self.yknots, weight)

    def unweighted(self) -> "TensorBSpline":
        return self.with_weight(1)

    def __repr__(self):
        xs = ",".join(str(t) for t in self.xknots)
        ys = ",".join(str(t) for t in self.yknots)
        w = "" if self.weight == 1 else f", w={self.weight}"
        return f"B[{xs} ; {ys}{w}]"


def eval_tensor(B: TensorBSpline, x, y, domain=None) -> Fraction:
    """Weighted tensor value; on the right/top edge of ``domain`` evaluate from the left."""
    p1, p2 = B.degree
    x, y = as_rational(x), as_rational(y)
    left_x = domain is not None and x == domain[1]
    left_y = domain is not None and y == domain[3]
    vx = eval_univariate(B.xknots, p1, x, left_x)
    if not vx:
        return Fraction(0)
    return B.weight * vx * eval_univariate(B.yknots, p2, y, left_y)


def insert_knot_tensor(B: TensorBSpline, axis, t_hat):
    """Knot insertion in the x (axis 1) or y (axis 2) direction."""
    p = B.degree[axis - 1]
    left, a1, right, a2 = insert_knot(B.knots(axis), p, t_hat)
    if axis == VERTICAL:
        return (TensorBSpline(B.degree, left, B.yknots, B.weight * a1), a1,
                TensorBSpline(B.degree, right, B.yknots, B.weight * a2), a2)
    return (TensorBSpline(B.degree, B.xknots, left, B.weight * a1), a1,
            TensorBSpline(B.degree, B.xknots, right, B.weight * a2), a2)


def splits_of(B: TensorBSpline):
    x0, x1, y0, y1 = B.support
    out = [SplitSpec(VERTICAL, t, y0, y1, m) for t, m in multiplicities(B.xknots)]
    out += [SplitSpec(HORIZONTAL, t, x0, x1, m) for t, m in multiplicities(B.yknots)]
    return out


@dataclass(frozen=True)
class SupportStatus:
    status: str
    witness: SplitSpec | None = None

    @property
    def minimal(self) -> bool:
        return self.status == MINIMAL


def traverses(split: SplitSpec, B: TensorBSpline) -> bool:
    """True when ``split`` cuts the open support of B into two pieces."""
    x0, x1, y0, y1 = B.support
    if split.axis == VERTICAL:
        return x0 < split.fixed < x1 and split.lo <= y0 and y1 <= split.hi
    return y0 < split.fixed < y1 and split.lo <= x0 and x1 <= split.hi


def support_status(B: TensorBSpline, mesh) -> SupportStatus:
    """Classify B against ``mesh``.

    A support leaving the domain always has a split outside every mesh line,
    so the containment loop also covers the ``supp B`` within the domain test.
    """
    x0, x1, y0, y1 = B.support
    for s in splits_of(B):
        if multiplicity_over(mesh.line(s.axis, s.fixed), s.lo, s.hi) < s.multiplicity:
            return SupportStatus(NO_SUPPORT, s)
    for axis, lo, hi, run in ((VERTICAL, x0, x1, (y0, y1)), (HORIZONTAL, y0, y1, (x0, x1))):
        own = dict(multiplicities(B.knots(axis)))
        for fixed in mesh.fixed_values(axis):
            if lo < fixed < hi:
                pieces = mesh.line(axis, fixed)
                if covers(pieces, *run):
                    mu = multiplicity_over(pieces, *run)
                    if own.get(fixed, 0) != mu:
                        return SupportStatus(NOT_MINIMAL, SplitSpec(axis, fixed, run[0], run[1], mu))
    return SupportStatus(MINIMAL)


def restriction_to_split(B: TensorBSpline, split: SplitSpec):
    """Univariate knot vector and degree of B restricted to a traversing split."""
    if not traverses(split, B):
        raise SplitDoesNotTraverse(f"{split} does not traverse {B}")
    if split.axis == HORIZONTAL:
        return B.xknots, B.degree[0]
    return B.yknots, B.degree[1]


def bernstein_on_element(B: TensorBSpline, el):
    """(p1+1)x(p2+1) weighted Bernstein coefficients of B on ``el``; [i][j] = x-index, y-index."""
    p1, p2 = B.degree
    x0, x1, y0, y1 = B.support
    if el.x_hi <= x0 or el.x_lo >= x1 or el.y_hi <= y0 or el.y_lo >= y1:
        return tuple((Fraction(0),) * (p2 + 1) for _ in range(p1 + 1))
    bx = bezier_coefficients(B.xknots, p1, el.x_lo, el.x_hi)
    by = bezier_coefficients(B.yknots, p2, el.y_lo, el.y_hi)
    return tuple(tuple(B.weight * u * v for v in by) for u in bx)


def bernstein_value(coeffs, el, x, y) -> Fraction:
    """Evaluate a tensor Bernstein polynomial given by ``coeffs`` on ``el``."""
    from math import comb

    p1 = len(coeffs) - 1
    p2 = len(coeffs[0]) - 1
    s = (as_rational(x) - el.x_lo) / (el.x_hi - el.x_lo)
    t = (as_rational(y) - el.y_lo) / (el.y_hi - el.y_lo)
    bx = [comb(p1, i) * s ** i * (1 - s) ** (p1 - i) for i in range(p1 + 1)]
    by = [comb(p2, j) * t ** j * (1 - t) ** (p2 - j) for j in range(p2 + 1)]
    return sum(coeffs[i][j] * bx[i] * by[j] for i in range(p1 + 1) for j in range(p2 + 1))
