from fractions import Fraction
from types import SimpleNamespace

import pytest

from eqdeg.chartab import SignedGroup, bundled_table, isotypic_multiplicities, permutation_character
from eqdeg.ddedeg import LinearizationData, SpectralTable
from eqdeg.o2gamma import GammaContext

F = Fraction


def hexagon_coupling_matrix():
    """Circulant nearest-neighbour matrix: -1 on the diagonal, 1/10 beside it."""
    n = 6
    mat = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = F(-1)
        mat[i][(i + 1) % n] = F(1, 10)
        mat[i][(i - 1) % n] = F(1, 10)
    return mat


def hexagon_delay_matrices():
    """Six delay blocks (d, a, b, c, b, a) * A-hat with the example weights."""
    weights = [F(69, 10), F(4), F(1), F(3), F(1), F(4)]
    base = hexagon_coupling_matrix()
    return [[[w * v for v in row] for row in base] for w in weights]


@pytest.fixture(scope="session")
def d6_table():
    return bundled_table("D6")


@pytest.fixture(scope="session")
def d6ctx(d6_table):
    return GammaContext.from_signed_group(SignedGroup(d6_table))


@pytest.fixture(scope="session")
def z1ctx():
    return GammaContext.from_signed_group(SignedGroup(bundled_table("Z1")))


@pytest.fixture(scope="session")
def d6_analysis(d6_table, d6ctx):
    chi = permutation_character(d6_table)
    decomposition = isotypic_multiplicities(chi, d6_table)
    lin = LinearizationData.from_matrices(
        d6_table, decomposition, hexagon_delay_matrices()
    )
    spectral = SpectralTable(lin, decomposition, k_max=50).build()
    return SimpleNamespace(
        table=d6_table,
        ctx=d6ctx,
        decomposition=decomposition,
        lin=lin,
        spectral=spectral,
    )
