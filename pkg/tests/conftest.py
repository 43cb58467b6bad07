import pytest

from ccsym.coeff import RingSpec, ring_new


@pytest.fixture
def Q():
    return ring_new(RingSpec("Q"))


@pytest.fixture
def Z():
    return ring_new(RingSpec("Z"))


@pytest.fixture
def Qe():
    """Q[e] with e^2 = 0."""
    return ring_new(RingSpec("Q", nil=(("e", 2),)))


@pytest.fixture
def Ze():
    """Z[e] with e^2 = 0."""
    return ring_new(RingSpec("Z", nil=(("e", 2),)))


@pytest.fixture
def tower():
    """Q[e1, e2] with e1^2 = e2^3 = 0, the workhorse test ring."""
    return ring_new(RingSpec("Q", nil=(("e1", 2), ("e2", 3))))


@pytest.fixture
def Quv():
    """Q[u][v] with v^5 = 0 and u a free generator."""
    return ring_new(RingSpec("Q", free=("u",), nil=(("v", 5),)))
