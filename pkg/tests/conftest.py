import functools

import pytest
from hypothesis import HealthCheck, settings

from defect_statesum.examples import shipped_systems

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SHIPPED = tuple(shipped_systems())


@functools.lru_cache(maxsize=None)
def system(name):
    return shipped_systems()[name]()


@pytest.fixture(params=SHIPPED)
def shipped(request):
    return system(request.param)
