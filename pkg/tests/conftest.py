import pytest
from hypothesis import HealthCheck, settings

from askey_wilson.forms import QuadratureSettings
from askey_wilson.params import fixture_f1, inverse_params, to_float_params

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def t():
    return fixture_f1()


@pytest.fixture(scope="session")
def ti(t):
    return inverse_params(t)


@pytest.fixture(scope="session")
def tf(t):
    return to_float_params(t, 256)


@pytest.fixture(scope="session")
def qs():
    return QuadratureSettings()
