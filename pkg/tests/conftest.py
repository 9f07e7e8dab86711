import math

import pytest

from obslab import RectangleGeometry, build_mode_set


@pytest.fixture(scope="session")
def square():
    return RectangleGeometry(math.pi, math.pi)


@pytest.fixture(scope="session")
def modes4(square):
    return build_mode_set(square, 4, 4)


@pytest.fixture(scope="session")
def modes6(square):
    return build_mode_set(square, 6, 6)


@pytest.fixture(scope="session")
def modes8(square):
    return build_mode_set(square, 8, 8)
