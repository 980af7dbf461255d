import pytest

from hallq.checks import Workbench
from hallq.quiver import QuiverWithAut


def a2_quiver():
    return QuiverWithAut.build(["1", "2"], [("a", "1", "2")])


def kronecker_quiver():
    return QuiverWithAut.build(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


def a3_fold_quiver():
    return QuiverWithAut.build(
        ["1", "2", "3"],
        [("a", "1", "2"), ("b", "3", "2")],
        {"1": "3", "3": "1"},
        {"a": "b", "b": "a"},
    )


def a3_quiver():
    return QuiverWithAut.build(["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")])


@pytest.fixture(scope="session")
def a2_q2():
    return Workbench(a2_quiver(), 2)


@pytest.fixture(scope="session")
def a2_q3():
    return Workbench(a2_quiver(), 3)


@pytest.fixture(scope="session")
def kron_q2():
    return Workbench(kronecker_quiver(), 2)


@pytest.fixture(scope="session")
def a3f_q2():
    return Workbench(a3_fold_quiver(), 2)


@pytest.fixture(scope="session")
def a3_q4():
    return Workbench(a3_quiver(), 2, e=2)
