from __future__ import annotations

import pytest

from topobelief.demo import car_frame


@pytest.fixture
def car():
    """The bundled car scenario frame."""
    return car_frame()


@pytest.fixture
def car_universe(car):
    return car.universe


def subset_bits(universe, names):
    return universe.subset(names)
