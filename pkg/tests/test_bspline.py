from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lrspline.bspline import (
    MINIMAL,
    NO_SUPPORT,
    NOT_MINIMAL,
    TensorBSpline,
    bernstein_on_element,
    bernstein_value,
    eval_tensor,
    eval_univariate,
    insert_knot,
    insert_knot_tensor,
    restriction_to_split,
    splits_of,
    support_status,
)
from lrspline.errors import BadKnotCount, KnotOutOfInterior, SplitDoesNotTraverse
from lrspline.mesh import HORIZONTAL, VERTICAL, Element, SplitSpec, insert_split, new_tensor_mesh
from lrspline.space import tensor_basis


def recursive_bspline(kv, p, t):
    """Textbook recursive definition, independent of the iterative evaluator."""
    if p == 0:
        return F(1) if kv[0] <= t < kv[1] else F(0)
    out = F(0)
    if kv[p] != kv[0]:
        out += (t - kv[0]) / (kv[p] - kv[0]) * recursive_bspline(kv[:-1], p - 1, t)
    if kv[p + 1] != kv[1]:
        out += (kv[p + 1] - t) / (kv[p + 1] - kv[1]) * recursive_bspline(kv[1:], p - 1, t)
    return out


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@st.composite
def knot_vectors(draw, max_degree=3):
    p = draw(st.integers(0, max_degree))
    kv = sorted(draw(st.lists(st.fractions(0, 4, max_denominator=6), min_size=p + 2, max_size=p + 2)))
    assume(kv[0] < kv[-1])
    assume(all(kv.count(t) <= p + 1 for t in kv))
    return tuple(kv), p


# -- evaluation ---------------------------------------------------------------------------

def test_hat_peak():
    assert eval_univariate((0, 1, 2), 1, 1) == 1


def test_quadratic_midpoint():
    assert eval_univariate((0, 1, 2, 3), 2, F(3, 2)) == F(3, 4) == recursive_bspline((0, 1, 2, 3), 2, F(3, 2))


def test_double_left_knot():
    assert eval_univariate((0, 0, 1, 2), 2, 0) == 0 == recursive_bspline((0, 0, 1, 2), 2, F(0))


def test_triple_left_knot_jumps():
    assert eval_univariate((0, 0, 0, 1), 2, 0) == 1


def test_bad_knot_count():
    with pytest.raises(BadKnotCount):
        eval_univariate((0, 1), 1, 0)


@settings(max_examples=150, deadline=None)
@given(knot_vectors(), rationals)
def test_matches_recursive_definition(kvp, t):
    kv, p = kvp
    assert eval_univariate(kv, p, t) == recursive_bspline(kv, p, t)


@settings(max_examples=150, deadline=None)
@given(knot_vectors(), st.fractions(0, 1, max_denominator=50))
def test_support_and_positivity(kvp, s):
    kv, p = kvp
    t = kv[0] + s * (kv[-1] - kv[0])
    value = eval_univariate(kv, p, t)
    if kv[0] < t < kv[-1]:
        assert value > 0
    assert eval_univariate(kv, p, kv[0] - 1) == 0
    assert eval_univariate(kv, p, kv[-1] + 1) == 0


# -- knot insertion --------------------------------------------------------------------------

def test_insert_knot_example():
    left, a1, right, a2 = insert_knot((0, 1, 2, 3), 2, F(3, 2))
    assert left == (0, 1, F(3, 2), 2) and right == (1, F(3, 2), 2, 3)
    assert a1 == a2 == F(3, 4)
    for k in range(21):
        t = F(3 * k, 20)
        assert (eval_univariate((0, 1, 2, 3), 2, t)
                == a1 * recursive_bspline(left, 2, t) + a2 * recursive_bspline(right, 2, t))


def test_insert_repeated_knot():
    left, _, right, _ = insert_knot((0, 1, 2, 3), 2, 1)
    assert left.count(1) == 2


def test_insert_symmetric():
    _, a1, _, a2 = insert_knot((0, 1, 3, 4), 2, 2)
    assert a1 == a2


def test_insert_outside():
    with pytest.raises(KnotOutOfInterior):
        insert_knot((0, 1, 2), 1, 2)


@settings(max_examples=100, deadline=None)
@given(knot_vectors(), st.fractions(0, 1, max_denominator=30), st.data())
def test_insert_knot_identity(kvp, s, data):
    kv, p = kvp
    t_hat = kv[0] + s * (kv[-1] - kv[0])
    assume(kv[0] < t_hat < kv[-1] and kv.count(t_hat) < p + 1)
    left, a1, right, a2 = insert_knot(kv, p, t_hat)
    for _ in range(10):
        t = data.draw(st.fractions(kv[0], kv[-1], max_denominator=40))
        assert eval_univariate(kv, p, t) == a1 * eval_univariate(left, p, t) + a2 * eval_univariate(right, p, t)


def test_insert_knot_tensor_weights():
    B = TensorBSpline((2, 1), (0, 1, 2, 3), (0, 1, 2), weight=F(1, 2))
    left, a1, right, a2 = insert_knot_tensor(B, HORIZONTAL, F(1, 2))
    assert left.xknots == B.xknots and left.weight == B.weight * a1
    x, y = F(5, 4), F(1, 3)
    assert eval_tensor(B, x, y) == eval_tensor(left, x, y) + eval_tensor(right, x, y)


# -- tensor B-splines ---------------------------------------------------------------------------

def test_tensor_outside_support():
    assert eval_tensor(TensorBSpline((1, 1), (0, 1, 2), (0, 1, 2)), 3, 1) == 0


def test_bilinear_peak():
    assert eval_tensor(TensorBSpline((1, 1), (0, 1, 2), (0, 1, 2)), 1, 1) == 1


def test_biquadratic_center():
    B = TensorBSpline((2, 2), (0, 1, 2, 3), (0, 1, 2, 3))
    oracle = recursive_bspline((0, 1, 2, 3), 2, F(3, 2)) ** 2
    assert eval_tensor(B, F(3, 2), F(3, 2)) == oracle == F(9, 16)


def test_splits_of_simple():
    s = splits_of(TensorBSpline((2, 2), (0, 1, 2, 3), (0, 1, 2, 3)))
    assert sum(x.axis == VERTICAL for x in s) == 4 and sum(x.axis == HORIZONTAL for x in s) == 4
    assert {x.multiplicity for x in s} == {1}


def test_splits_of_repeated_knot():
    s = splits_of(TensorBSpline((2, 1), (0, 0, 1, 2), (0, 1, 2)))
    assert SplitSpec(VERTICAL, 0, 0, 2, 2) in s


# -- support status --------------------------------------------------------------------------------

def test_fig6_statuses(get_scenario):
    sc = get_scenario("fig6")
    a, b, c = sc.highlight
    assert support_status(a, sc.mesh).status == MINIMAL
    assert support_status(b, sc.mesh).status == MINIMAL
    st_c = support_status(c, sc.mesh)
    assert st_c.status == NOT_MINIMAL and st_c.witness.axis == HORIZONTAL


def test_wider_than_domain():
    m = new_tensor_mesh([(i, 1) for i in range(4)], [(i, 1) for i in range(4)], (1, 1))
    assert support_status(TensorBSpline((1, 1), (-1, 0, 1), (0, 1, 2)), m).status == NO_SUPPORT


def test_tensor_windows_are_minimal():
    m = new_tensor_mesh([(0, 3), (1, 1), (2, 2), (3, 3)], [(0, 2), (1, 1), (2, 2)], (2, 1))
    basis = tensor_basis(m)
    assert basis and all(support_status(B, m).minimal for B in basis)


def test_refinement_monotone():
    m = new_tensor_mesh([(i, 1) for i in range(6)], [(i, 1) for i in range(6)], (2, 2))
    basis = tensor_basis(m)
    refined = insert_split(m, SplitSpec(VERTICAL, F(5, 2), 0, 5))
    for B in basis:
        assert support_status(B, refined).status in (MINIMAL, NOT_MINIMAL)


# -- restrictions and Bernstein extraction ------------------------------------------------------------

def test_restriction_horizontal():
    B = TensorBSpline((2, 1), (0, 1, 2, 3), (0, 1, 2))
    assert restriction_to_split(B, SplitSpec(HORIZONTAL, 1, 0, 3)) == (B.xknots, 2)
    assert restriction_to_split(B, SplitSpec(VERTICAL, 1, 0, 2)) == (B.yknots, 1)


def test_restriction_requires_traversal():
    B = TensorBSpline((1, 1), (0, 1, 2), (0, 1, 2))
    with pytest.raises(SplitDoesNotTraverse):
        restriction_to_split(B, SplitSpec(HORIZONTAL, 0, 0, 2))


def test_bernstein_disjoint_is_zero():
    B = TensorBSpline((1, 1), (0, 1, 2), (0, 1, 2))
    el = Element(F(5), F(6), F(0), F(1))
    assert bernstein_on_element(B, el) == ((0, 0), (0, 0))


def test_bernstein_bilinear_corner():
    B = TensorBSpline((1, 1), (0, 1, 2), (0, 1, 2))
    el = Element(F(0), F(1), F(0), F(1))
    corners = tuple(tuple(eval_tensor(B, x, y) for y in (0, 1)) for x in (0, 1))
    assert bernstein_on_element(B, el) == corners == ((0, 0), (0, 1))


@settings(max_examples=60, deadline=None)
@given(knot_vectors(3), knot_vectors(2), st.data())
def test_bernstein_reconstruction(kx, ky, data):
    B = TensorBSpline((kx[1], ky[1]), kx[0], ky[0], weight=F(2, 3))
    xs = sorted(set(B.xknots))
    ys = sorted(set(B.yknots))
    i = data.draw(st.integers(0, len(xs) - 2))
    j = data.draw(st.integers(0, len(ys) - 2))
    el = Element(xs[i], xs[i + 1], ys[j], ys[j + 1])
    coeffs = bernstein_on_element(B, el)
    for _ in range(5):
        s = data.draw(st.fractions(0, 1, max_denominator=17).filter(lambda v: 0 < v < 1))
        t = data.draw(st.fractions(0, 1, max_denominator=17).filter(lambda v: 0 < v < 1))
        x = el.x_lo + s * (el.x_hi - el.x_lo)
        y = el.y_lo + t * (el.y_hi - el.y_lo)
        assert bernstein_value(coeffs, el, x, y) == eval_tensor(B, x, y)
