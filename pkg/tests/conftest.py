from functools import lru_cache

import pytest

from lrspline.scenarios import scenario
from lrspline.space import collection


@lru_cache(maxsize=None)
def cached_scenario(name):
    return scenario(name)


@lru_cache(maxsize=None)
def cached_collection(name, kind):
    return collection(cached_scenario(name).mesh, kind)


@pytest.fixture
def get_scenario():
    return cached_scenario


@pytest.fixture
def get_collection():
    return cached_collection
