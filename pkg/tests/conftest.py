from __future__ import annotations

import pytest

from ranklab import codes
from ranklab.gf import MatrixGF, field_of_order


@pytest.fixture(scope="session")
def gf2():
    return field_of_order(2)


@pytest.fixture(scope="session")
def mrd333():
    """Gabidulin 3x3 over GF(2) with d = 3, t = 1."""
    return codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 1))


@pytest.fixture(scope="session")
def pair_cdc(gf2):
    """Lift of {0, I_2}: two planes of GF(2)^4 at subspace distance 4."""
    pair = codes.RankCode.from_codewords([MatrixGF.zeros(gf2, 2, 2), MatrixGF.identity(gf2, 2)])
    return codes.lift_code(pair)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
