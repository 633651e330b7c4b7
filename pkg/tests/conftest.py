import os

import pytest

from subrep.artheory import build_catalog
from subrep.examples import example_quiver
from subrep.ffmat import PrimeField
from subrep.lambdamod import LambdaAlgebra
from subrep.repfile import load_catalog

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def _catalog(p):
    path = os.path.join(FIXTURES, f"catalog_p{p}")
    if os.path.isdir(path):
        return load_catalog(path)
    return build_catalog(example_quiver(), LambdaAlgebra(PrimeField(p), 2), seed=0)


@pytest.fixture(scope="session")
def catalog_p2():
    return _catalog(2)


@pytest.fixture(scope="session")
def catalog_p3():
    return _catalog(3)
