import pytest
from hypothesis import HealthCheck, settings

from qiter.exactfield import charp_tower, cyclotomic_tower, make_tower
from qiter.qarith import make_context
from qiter.ratfunc import clear_cache

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _fresh_cache():
    # tests must not lean on values cached by earlier tests
    clear_cache()
    yield


@pytest.fixture
def ctx3():
    return make_context(cyclotomic_tower(3), 3)


@pytest.fixture
def ctx2():
    return make_context(cyclotomic_tower(2), 2)


@pytest.fixture
def ctx_f7():
    return make_context(charp_tower(7, 3), 3)


@pytest.fixture
def sqrt2():
    return make_tower(0, [-2, 0, 1])
