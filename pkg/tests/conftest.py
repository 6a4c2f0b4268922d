import math
from fractions import Fraction

import numpy as np
import pytest

from fhlab.exponents import ProblemParams
from fhlab.grids import Field, Grid
from fhlab.regions import LebesguePair

BOX = 16 * math.pi


@pytest.fixture
def params():
    """Worked rational fixture used across the suite."""
    return ProblemParams(d=1, m=2, gamma=Fraction(1, 2), beta=Fraction(2))


@pytest.fixture
def point():
    return LebesguePair(Fraction(2, 5), Fraction(1, 20))


@pytest.fixture
def grid_1d():
    return Grid(1, 256, BOX)


@pytest.fixture
def gaussian_1d(grid_1d):
    return Field(grid_1d, (0.5 * np.exp(-grid_1d.x**2 / 4.0)).astype(np.complex128))
