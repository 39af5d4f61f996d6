import pytest

from saqd.code import build_code
from saqd.lattice import Manifold

_CODE_CACHE = {}


def cached_code(kind, L, d):
    key = (kind, L, d)
    if key not in _CODE_CACHE:
        _CODE_CACHE[key] = build_code(Manifold(kind, L), d)
    return _CODE_CACHE[key]


@pytest.fixture(scope="session")
def code_factory():
    return cached_code
