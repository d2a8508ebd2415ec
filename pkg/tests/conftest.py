import pytest

from equifuse import chartab
from equifuse.presets import group_preset


@pytest.fixture(scope="session")
def trivial():
    return group_preset("cyclic:1")


@pytest.fixture(scope="session")
def z2():
    return group_preset("cyclic:2")


@pytest.fixture(scope="session")
def z4():
    return group_preset("cyclic:4")


@pytest.fixture(scope="session")
def klein4():
    return group_preset("klein4")


@pytest.fixture(scope="session")
def s3():
    return group_preset("sym:3")


@pytest.fixture(scope="session")
def s4():
    return group_preset("sym:4")


@pytest.fixture(scope="session")
def d4():
    return group_preset("dihedral:4")


@pytest.fixture(scope="session")
def q8():
    return group_preset("quaternion8")


@pytest.fixture(scope="session")
def a4():
    return group_preset("alt:4")


@pytest.fixture(scope="session")
def ctx_s3(s3):
    return chartab.make_context([s3])


@pytest.fixture(scope="session")
def ctx_s4(s4):
    return chartab.make_context([s4])
