import os

import pytest
from hypothesis import HealthCheck, settings

from biharp.core.dyadic import DyadicRectangle
from biharp.core.haar import HaarExpansion

settings.register_profile("dev", max_examples=40, deadline=None)
settings.register_profile(
    "ci",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci" if os.environ.get("CI") else "dev")

UNIT = DyadicRectangle.unit()
QUARTER = DyadicRectangle.of(1, 0, 1, 0)


@pytest.fixture
def two_coefficient() -> HaarExpansion:
    """h_[0,1)^2 + 3 h_[0,1/2)^2, whose decomposition is worked out by hand."""
    return HaarExpansion({UNIT: 1.0, QUARTER: 3.0})


@pytest.fixture
def unit_atom() -> HaarExpansion:
    return HaarExpansion.single(UNIT, 1.0)
