import pytest

from arcmub import field_new, hall_plane, pg2


@pytest.fixture(scope="session")
def F2():
    return field_new(2)


@pytest.fixture(scope="session")
def F3():
    return field_new(3)


@pytest.fixture(scope="session")
def F4():
    return field_new(2, 2)


@pytest.fixture(scope="session")
def F5():
    return field_new(5)


@pytest.fixture(scope="session")
def F8():
    return field_new(2, 3)


@pytest.fixture(scope="session")
def F9():
    return field_new(3, 2)


@pytest.fixture(scope="session")
def F16():
    return field_new(2, 4)


@pytest.fixture(scope="session")
def P2(F2):
    return pg2(F2)


@pytest.fixture(scope="session")
def P3(F3):
    return pg2(F3)


@pytest.fixture(scope="session")
def P4(F4):
    return pg2(F4)


@pytest.fixture(scope="session")
def P8(F8):
    return pg2(F8)


@pytest.fixture(scope="session")
def P9(F9):
    return pg2(F9)


@pytest.fixture(scope="session")
def P16(F16):
    return pg2(F16)


@pytest.fixture(scope="session")
def hall():
    return hall_plane()
