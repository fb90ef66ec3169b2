import pytest
from hypothesis import HealthCheck, settings

from monapprox import Signature, parse_family

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

EMPTY = Signature(())
SIG_P = Signature.of("P")
SIG_PQ = Signature.of("P", "Q")

PURE = """
signature
box
  cell u = 1..
"""

TWO = """
signature P
box
  cell !P = 0
  cell P  = 1..
box
  cell !P = 1..
  cell P  = 0
"""

BOX = """
signature P
box
  cell !P = 0..
  cell P  = 1..
"""


@pytest.fixture
def f_pure():
    return parse_family(PURE)


@pytest.fixture
def f_two():
    return parse_family(TWO)


@pytest.fixture
def f_box():
    return parse_family(BOX)
