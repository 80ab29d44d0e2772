import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from k3gen.field import make_field
from k3gen.ideals import primes_above
from k3gen.sunits import sunit_basis, sunit_basis_from_gens


@pytest.fixture(scope="session")
def k5():
    return make_field(5)


@pytest.fixture(scope="session")
def k11():
    return make_field(11)


@pytest.fixture(scope="session")
def k303():
    return make_field(303)


@pytest.fixture(scope="session")
def basis11(k11):
    """The reference S-unit basis {2, (-1+sqrt(-11))/2, (-1-sqrt(-11))/2}."""
    w = k11.omega()
    S = primes_above(k11, [2, 3])
    return sunit_basis_from_gens(k11, S, [k11.elem(2), w - 1, (w - 1).conj()])


@pytest.fixture(scope="session")
def basis5(k5):
    return sunit_basis(k5, primes_above(k5, [2, 3, 5]))


@pytest.fixture(scope="session")
def tessellations():
    """Session-shared cell complexes, built on demand."""
    from k3gen.voronoi import enumerate_perfect

    cache = {}

    def get(d):
        if d not in cache:
            cache[d] = enumerate_perfect(make_field(d))
        return cache[d]

    return get
