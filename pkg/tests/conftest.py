import pytest
from hypothesis import HealthCheck, settings

from lppoly import mpnum

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=120,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
settings.load_profile("deterministic")


@pytest.fixture(autouse=True)
def default_precision():
    """All tests run at 192 bits unless they open their own context."""
    with mpnum.workprec(192):
        yield
