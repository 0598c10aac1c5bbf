import pytest
from hypothesis import HealthCheck, settings

from curvelog import IntegratorConfig, PoleSet, Section

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def ps01():
    return PoleSet.of("0,1")


@pytest.fixture
def std01(ps01):
    return Section.standard(ps01)


@pytest.fixture
def tight():
    return IntegratorConfig(rtol=1e-12, atol=1e-14)
