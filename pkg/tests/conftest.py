import pytest

from mrbder.fields import Field, QQ
from mrbder.structures import adjoint_bimodule, dual_pair


@pytest.fixture
def F5():
    return Field.prime(5)


@pytest.fixture
def F2():
    return Field.prime(2)


@pytest.fixture
def dual_q():
    return dual_pair(QQ)


@pytest.fixture
def dual_q_adj(dual_q):
    return dual_q, adjoint_bimodule(dual_q)
