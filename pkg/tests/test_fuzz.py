import random

import pytest

from lrspline.cli import run_command
from lrspline.fuzz import DEFAULT_SEED, check_history, random_lr_mesh, run_fuzz, seed_from_env, FuzzFindings
from lrspline.mesh import validate_lr_rules


def test_seed_default_and_override(monkeypatch):
    monkeypatch.delenv("LRSPLINE_SEED", raising=False)
    assert seed_from_env() == DEFAULT_SEED
    monkeypatch.setenv("LRSPLINE_SEED", " 42 ")
    assert seed_from_env() == 42
    monkeypatch.setenv("LRSPLINE_SEED", "forty")
    with pytest.raises(ValueError):
        seed_from_env()
    assert run_command(["fuzz", "--count", "1"])[0] == 1


def test_bad_fuzz_arguments():
    assert run_command(["fuzz", "--degree", "2"])[0] == 1
    assert run_command(["fuzz", "--degree", "a,b"])[0] == 1
    assert run_command(["fuzz", "--count", "0"])[0] == 1


def test_random_meshes_are_lr_meshes():
    rng = random.Random(3)
    for degree in [(0, 0), (1, 1), (2, 2), (3, 2)]:
        for _ in range(10):
            mesh = random_lr_mesh(rng, degree)
            assert mesh.is_lr and validate_lr_rules(mesh) == []
            assert mesh.domain == (0, 1, 0, 1)


def test_same_seed_same_findings():
    a = run_fuzz([(2, 2)], 5, 11)
    b = run_fuzz([(2, 2)], 5, 11)
    assert a[(2, 2)] == b[(2, 2)] and a[(2, 2)].ok


def test_findings_flag_small_circuits():
    f = FuzzFindings(ms_circuits=[5])
    assert not f.ok
    assert FuzzFindings(ms_circuits=[6], lr_circuits=[8]).ok


def test_check_history_counts_steps():
    rng = random.Random(5)
    mesh = random_lr_mesh(rng, (1, 1), steps=3)
    f = check_history(mesh, rng, FuzzFindings())
    assert f.meshes == 1 and f.steps == len(mesh.history) and f.ok
