"""Shared fixtures: small reference algebras and matrices."""

from fractions import Fraction

import pytest

from nilaa.nilalg import LieAlgebraSpec
from nilaa.ratlin import QMatrix


def heisenberg() -> LieAlgebraSpec:
    """dim 3, [x1, x2] = x3."""
    return LieAlgebraSpec.from_sparse(3, [(1, 2, 3, 1)])


def free_nilpotent_2_3() -> LieAlgebraSpec:
    """Free 2-generator class-3 algebra on the Hall basis x1..x5:
    [x1,x2]=x3, [x1,x3]=x4, [x2,x3]=x5."""
    return LieAlgebraSpec.from_sparse(5, [(1, 2, 3, 1), (1, 3, 4, 1), (2, 3, 5, 1)])


def abelian(dim: int) -> LieAlgebraSpec:
    return LieAlgebraSpec(dim, {})


def jordan_block(n: int) -> QMatrix:
    return QMatrix([[Fraction(int(j == i or j == i + 1)) for j in range(n)]
                    for i in range(n)])


@pytest.fixture
def heis():
    return heisenberg()


@pytest.fixture
def free23():
    return free_nilpotent_2_3()
