import random

import pytest

from dickson_delta.gf import field_new

FIELD_PARAMS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (2, 4), (3, 2)]


@pytest.fixture(params=FIELD_PARAMS, ids=lambda pr: f"GF({pr[0]}^{pr[1]})")
def field(request):
    return field_new(*request.param)


@pytest.fixture(params=[(2, 1), (3, 1), (2, 2)], ids=lambda pr: f"q={pr[0] ** pr[1]}")
def small_field(request):
    return field_new(*request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)
