from fractions import Fraction

import pytest

from diagsep.quotient import build_net
from diagsep.separation import SeparationParams
from diagsep.symbolic import chacon, chacon_prefix, fullshift2, odometer2


@pytest.fixture(scope="session")
def chacon_sys():
    return chacon()


@pytest.fixture(scope="session")
def odometer_sys():
    return odometer2()


@pytest.fixture(scope="session")
def fullshift_sys():
    return fullshift2()


@pytest.fixture(scope="session")
def gen_word():
    return chacon_prefix(50_000)


@pytest.fixture(scope="session")
def net_k4(chacon_sys):
    return build_net(chacon_sys, 4, 8)


@pytest.fixture(scope="session")
def params_k4(net_k4):
    return SeparationParams.for_net(net_k4, Fraction(2, 25))


@pytest.fixture(scope="session")
def net_toy(fullshift_sys):
    return build_net(fullshift_sys, 1, 2)
