from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrspline.bspline import eval_tensor
from lrspline.dependence import assemble_element_matrix, find_active_dependence
from lrspline.errors import ExpandedSplitTooShort, LRRulesViolated
from lrspline.fuzz import random_lr_mesh, random_split
from lrspline.linalg import rank
from lrspline.mesh import (
    HORIZONTAL,
    VERTICAL,
    SplitSpec,
    cross_degree,
    expanded_knot_vector,
    initial_mesh,
    insert_split,
    new_tensor_mesh,
    replay,
)
from lrspline.scenarios import lr_scenarios
from lrspline.space import (
    collection,
    derive_lr,
    dim_increment,
    dim_lr,
    dim_univariate,
    enumerate_ms,
    hand_in_hand,
    tensor_basis,
)


def open_grid(n, p):
    return [(i, p + 1 if i in (0, n) else 1) for i in range(n + 1)]


def curry_schoenberg(knots, p):
    return sum(m for _, m in knots) - p - 1


# -- dimension ------------------------------------------------------------------------------

def test_dim_univariate():
    assert dim_univariate([(0, 1), (1, 1), (2, 1), (3, 1)], 1) == 2
    assert dim_univariate([(0, 3), (1, 1), (2, 3)], 2) == 4
    assert dim_univariate([(0, 1), (1, 1)], 2) == 0


def test_dim_open_bilinear_tensor():
    k = [(0, 2), (1, 1), (2, 2)]
    m = new_tensor_mesh(k, k, (1, 1))
    assert dim_lr(m) == curry_schoenberg(k, 1) ** 2 == 9


@pytest.mark.parametrize("xn, yn, p", [(3, 2, (1, 1)), (4, 4, (2, 2)), (5, 3, (3, 2)), (2, 2, (0, 0))])
def test_dim_tensor_is_product(xn, yn, p):
    xk, yk = open_grid(xn, p[0]), open_grid(yn, p[1])
    m = new_tensor_mesh(xk, yk, p)
    assert dim_lr(m) == curry_schoenberg(xk, p[0]) * curry_schoenberg(yk, p[1])


def test_dim_fig7a(get_scenario):
    assert dim_lr(get_scenario("fig7a").mesh) == 9


def test_dim_fig8lr(get_scenario):
    assert dim_lr(get_scenario("fig8lr").mesh) == 11


def test_dim_rejects_rule_violation():
    m = new_tensor_mesh(open_grid(6, 2), open_grid(4, 2), (2, 2))
    m = insert_split(m, SplitSpec(HORIZONTAL, F(1, 2), 1, 3))
    with pytest.raises(LRRulesViolated):
        dim_lr(m)
    with pytest.raises(LRRulesViolated):
        derive_lr(m)


def test_increments_fig7a(get_scenario):
    mesh = get_scenario("fig7a").mesh
    state = initial_mesh(mesh)
    seen = []
    for split in mesh.history:
        seen.append((split.axis, dim_increment(state, split)))
        state = insert_split(state, split)
    assert seen == [(HORIZONTAL, 1), (HORIZONTAL, 1), (VERTICAL, 2), (VERTICAL, 2)]


def test_increment_fig8lr_last(get_scenario):
    mesh = get_scenario("fig8lr").mesh
    before = get_scenario("fig7a").mesh
    assert dim_increment(before, mesh.history[-1]) == 2
    assert dim_lr(mesh) - dim_lr(before) == 2


def test_minimal_length_gives_one():
    m = new_tensor_mesh(open_grid(6, 2), open_grid(4, 2), (2, 2))
    assert dim_increment(m, SplitSpec(HORIZONTAL, F(1, 2), 1, 4)) == 1


def test_too_short_split():
    m = new_tensor_mesh(open_grid(6, 2), open_grid(4, 2), (2, 2))
    with pytest.raises(ExpandedSplitTooShort):
        dim_increment(m, SplitSpec(HORIZONTAL, F(1, 2), 1, 3))


# -- collections ------------------------------------------------------------------------------

def test_tensor_ms_is_tensor_basis():
    xk, yk = open_grid(4, 2), open_grid(3, 1)
    m = new_tensor_mesh(xk, yk, (2, 1))
    ms = enumerate_ms(m)
    assert len(ms) == curry_schoenberg(xk, 2) * curry_schoenberg(yk, 1)
    assert set(ms.keys) == {B.key for B in tensor_basis(m)}
    assert set(derive_lr(m).keys) == set(ms.keys)
    assert rank(assemble_element_matrix(ms.bsplines, m).rows, len(ms)) == dim_lr(m)


def test_fig7a_collections(get_scenario):
    mesh = get_scenario("fig7a").mesh
    ms, lr = enumerate_ms(mesh), derive_lr(mesh)
    assert (len(ms), len(lr)) == (10, 9)
    missing = set(ms.keys) - set(lr.keys)
    assert len(missing) == 1


def test_fig8lr_collection(get_scenario):
    assert len(derive_lr(get_scenario("fig8lr").mesh)) == 12


def test_fig15a_ms(get_scenario):
    sc = get_scenario("fig15a")
    assert set(enumerate_ms(sc.mesh).keys) == {B.key for B in sc.highlight}


@pytest.mark.parametrize("name", lr_scenarios())
def test_lr_subset_of_ms(get_collection, name):
    assert set(get_collection(name, "lr").keys) <= set(get_collection(name, "ms").keys)


def _points(mesh, seed, n=30):
    rng = random.Random(seed)
    a1, b1, a2, b2 = mesh.domain
    for _ in range(n):
        yield (a1 + (b1 - a1) * F(rng.randrange(0, 1001), 1000),
               a2 + (b2 - a2) * F(rng.randrange(0, 1001), 1000))


def _open_boundary(mesh):
    """Same tensor mesh and history, but with boundary multiplicity p+1."""
    xk, yk = mesh.tensor
    p1, p2 = mesh.degree
    xo = [(t, p1 + 1 if i in (0, len(xk) - 1) else m) for i, (t, m) in enumerate(xk)]
    yo = [(t, p2 + 1 if i in (0, len(yk) - 1) else m) for i, (t, m) in enumerate(yk)]
    return replay(new_tensor_mesh(xo, yo, mesh.degree), mesh.history)


@pytest.mark.parametrize("name", lr_scenarios())
def test_refinement_preserves_weighted_sum(get_scenario, get_collection, name):
    mesh = get_scenario(name).mesh
    lr = get_collection(name, "lr")
    tensor = tensor_basis(initial_mesh(mesh))
    for x, y in _points(mesh, name):
        assert (sum(eval_tensor(B, x, y, mesh.domain) for B in lr)
                == sum(eval_tensor(B, x, y, mesh.domain) for B in tensor))


@pytest.mark.parametrize("name", lr_scenarios())
def test_partition_of_unity(get_scenario, name):
    mesh = _open_boundary(get_scenario(name).mesh)
    lr = derive_lr(mesh)
    for x, y in _points(mesh, name):
        assert sum(eval_tensor(B, x, y, mesh.domain) for B in lr) == 1


# -- hand in hand --------------------------------------------------------------------------------

def test_hh1a(get_scenario):
    sc = get_scenario("hh1a")
    for kind in ("ms", "lr"):
        rep = hand_in_hand(sc.mesh, sc.pending, kind)
        assert rep.restricted_count == 0 and not rep.goes_hand_in_hand


def test_hh1b_ms_only(get_scenario):
    sc = get_scenario("hh1b")
    assert hand_in_hand(sc.mesh, sc.pending, "ms").goes_hand_in_hand
    assert not hand_in_hand(sc.mesh, sc.pending, "lr").goes_hand_in_hand


def test_hh1e(get_scenario):
    sc = get_scenario("hh1e")
    assert hand_in_hand(sc.mesh, sc.pending, "lr").goes_hand_in_hand
    assert hand_in_hand(sc.mesh, sc.pending, "ms").goes_hand_in_hand


def test_hh5(get_scenario):
    sc = get_scenario("hh5")
    rep = hand_in_hand(sc.mesh, sc.pending, "lr")
    assert (rep.r, rep.restricted_count, rep.restricted_rank, rep.goes_hand_in_hand) == (4, 5, 3, False)


# -- randomized consistency ---------------------------------------------------------------------------

degrees = st.sampled_from([(0, 0), (1, 1), (2, 1), (2, 2), (3, 2)])


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), degrees)
def test_dimension_increment_theorem(rnd, degree):
    mesh = random_lr_mesh(rnd, degree, steps=2)
    split = random_split(rnd, mesh)
    if split is None:
        return
    after = insert_split(mesh, split)
    assert dim_lr(after, check_rules=False) - dim_lr(mesh, check_rules=False) == dim_increment(mesh, split)


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([(1, 1), (2, 2), (2, 1)]))
def test_shortest_expansion_keeps_independence(rnd, degree):
    mesh = random_lr_mesh(rnd, degree, steps=3)
    for step, split in enumerate(mesh.history):
        q = cross_degree(degree, split.axis)
        prefix = initial_mesh(mesh)
        for s in mesh.history[:step + 1]:
            prefix = insert_split(prefix, s)
        _, _, length = expanded_knot_vector(prefix, split)
        if length == q + 2:
            assert find_active_dependence(derive_lr(prefix), diagnose=False).independent
