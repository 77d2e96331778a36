import pytest
from hypothesis import HealthCheck, settings

from k3pencils.fixgeom import geometry

settings.register_profile("k3", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("k3")


@pytest.fixture(scope="session", params=[6, 8, 12], ids=lambda n: f"n{n}")
def geo(request):
    return geometry(request.param)


@pytest.fixture(scope="session")
def geo6():
    return geometry(6)


@pytest.fixture(scope="session")
def geo8():
    return geometry(8)


@pytest.fixture(scope="session")
def geo12():
    return geometry(12)
