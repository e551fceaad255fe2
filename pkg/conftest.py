import pytest

from fgl_cobord.core.lazard import LazardPresentation, universal_table
from fgl_cobord.core.line_bundle import build_psi
from fgl_cobord.core.mishchenko import mishchenko_elements


@pytest.fixture(scope="session")
def L3():
    return LazardPresentation.build(3)


@pytest.fixture(scope="session")
def L6():
    return LazardPresentation.build(6)


@pytest.fixture(scope="session")
def F3(L3):
    return universal_table(L3)


@pytest.fixture(scope="session")
def F6(L6):
    return universal_table(L6)


@pytest.fixture(scope="session")
def cache6(L6, F6):
    return mishchenko_elements(L6, F6, 6, mode="integral")


@pytest.fixture(scope="session")
def psi6(cache6):
    return build_psi(cache6, 6)
