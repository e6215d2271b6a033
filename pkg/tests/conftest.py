import numpy as np
import pytest

from scsynth.models import Program
from scsynth.services.benchmarks import get_benchmark
from scsynth.services.cost import TestSuite, make_test_suite
from scsynth.services.netlist import parse_netlist

SUBTRACTOR_NET = "inputs 2\nXOR r0 r1 -> r2\noutput r2"
SCALE_HALF_NET = "inputs 1\nTFF r0 -> r1\nAND r0 r1 -> r2\noutput r2"
MULTIPLIER_NET = "inputs 2\nAND r0 r1 -> r2\noutput r2"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def subtractor_program() -> Program:
    return parse_netlist(SUBTRACTOR_NET)


@pytest.fixture
def scale_half_program() -> Program:
    return parse_netlist(SCALE_HALF_NET)


@pytest.fixture
def subtractor_suite() -> TestSuite:
    """Correlated |x - y| on an 8x8 grid at N=64."""
    return make_test_suite(get_benchmark("subtractor").target_spec(grid=8, sn_length=64))


@pytest.fixture
def scale_half_suite() -> TestSuite:
    return make_test_suite(get_benchmark("scale_half").target_spec(grid=16, sn_length=64))


@pytest.fixture
def sqrt_suite() -> TestSuite:
    return make_test_suite(get_benchmark("sqrt").target_spec(grid=8, sn_length=32))
