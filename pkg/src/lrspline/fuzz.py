"""Seeded random LR-meshes and the invariant checks run on them."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bspline import eval_tensor
from .dependence import find_active_dependence
from .errors import LRSplineError
from .mesh import (
    HORIZONTAL,
    VERTICAL,
    SplitSpec,
    cross_degree,
    insert_split,
    knot_vector_on_split,
    maximal_splits,
    new_tensor_mesh,
)
from .space import derive_lr, dim_increment, dim_lr, enumerate_ms

DEFAULT_SEED = 20240611
SEED_ENV = "LRSPLINE_SEED"


def seed_from_env(default=DEFAULT_SEED) -> int:
    value = os.environ.get(SEED_ENV, "").strip()
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {value!r}") from None


def _containing_run(mesh, split):
    for ms in maximal_splits(mesh, split.axis):
        if ms.fixed == split.fixed and ms.lo <= split.lo and split.hi <= ms.hi:
            return ms
    raise AssertionError("inserted split is not inside a maximal split")


def random_tensor_mesh(rng: random.Random, degree, max_interior=2, den=12):
    """Open-knot tensor mesh on [0, 1]^2 with a few interior lines."""
    axes = []
    for p in degree:
        n = rng.randint(1, max_interior)
        inner = sorted(rng.sample(range(1, den), n))
        axes.append([(Fraction(0), p + 1)] + [(Fraction(i, den), 1) for i in inner]
                    + [(Fraction(1), p + 1)])
    return new_tensor_mesh(axes[0], axes[1], degree)


def random_split(rng: random.Random, mesh, tries=60):
    """A split whose insertion keeps the mesh an LR-mesh, or ``None``."""
    for _ in range(tries):
        axis = rng.choice((VERTICAL, HORIZONTAL))
        fixed_vals = sorted(mesh.fixed_values(axis))
        if rng.random() < 0.7:
            i = rng.randrange(len(fixed_vals) - 1)
            fixed = (fixed_vals[i] + fixed_vals[i + 1]) / 2
        else:
            fixed = rng.choice(fixed_vals[1:-1] or fixed_vals)
        cross = sorted(mesh.fixed_values(3 - axis))
        need = cross_degree(mesh.degree, axis) + 2
        a = rng.randrange(len(cross) - 1)
        b = rng.randrange(a + 1, min(len(cross), a + need + 3))
        split = SplitSpec(axis, fixed, cross[a], cross[b], 1)
        try:
            after = insert_split(mesh, split)
        except (LRSplineError, ValueError):
            continue
        run = _containing_run(after, split)
        if knot_vector_on_split(after, run)[1] < need:
            continue
        try:
            dim_increment(mesh, split)
        except LRSplineError:
            continue
        return split
    return None


def random_lr_mesh(rng: random.Random, degree, steps=4):
    mesh = random_tensor_mesh(rng, degree)
    for _ in range(steps):
        split = random_split(rng, mesh)
        if split is None:
            break
        mesh = insert_split(mesh, split)
    return mesh


@dataclass
class FuzzFindings:
    meshes: int = 0
    steps: int = 0
    dim_failures: list = field(default_factory=list)
    unity_failures: list = field(default_factory=list)
    ms_circuits: list = field(default_factory=list)
    lr_circuits: list = field(default_factory=list)
    degree0_dependent: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        small_ms = [c for c in self.ms_circuits if c < 6]
        small_lr = [c for c in self.lr_circuits if c < 8]
        return not (self.dim_failures or self.unity_failures or small_ms or small_lr
                    or self.degree0_dependent)


def check_history(mesh, rng: random.Random, findings: FuzzFindings, points=30):
    """Run every randomized invariant on one refined mesh."""
    start = mesh
    while start.previous is not None:
        start = start.previous
    state = start
    dim = dim_lr(state, check_rules=False)
    for split in mesh.history:
        r = dim_increment(state, split)
        state = insert_split(state, split)
        new_dim = dim_lr(state, check_rules=False)
        if new_dim - dim != r:
            findings.dim_failures.append((split, new_dim - dim, r))
        dim = new_dim
        findings.steps += 1

    lr = derive_lr(mesh)
    for _ in range(points):
        x = Fraction(rng.randrange(0, 997), 996)
        y = Fraction(rng.randrange(0, 997), 996)
        total = sum(eval_tensor(B, x, y, mesh.domain) for B in lr)
        if total != 1:
            findings.unity_failures.append((x, y, total))

    ms = enumerate_ms(mesh)
    for coll, out in ((ms, findings.ms_circuits), (lr, findings.lr_circuits)):
        report = find_active_dependence(coll, diagnose=False)
        if not report.independent:
            out.append(len(report.circuit))
            if mesh.degree == (0, 0):
                findings.degree0_dependent.append(mesh)
    findings.meshes += 1
    return findings


def run_fuzz(degrees, count, seed, steps=4):
    """``count`` random histories per bidegree; one generator seeded once."""
    rng = random.Random(seed)
    results = {}
    for degree in degrees:
        findings = FuzzFindings()
        for _ in range(count):
            check_history(random_lr_mesh(rng, tuple(degree), steps), rng, findings)
        results[tuple(degree)] = findings
    return results
