import numpy as np
import pytest

from chemohapto import Grid, Params, State


@pytest.fixture
def params():
    return Params()


@pytest.fixture
def grid64():
    return Grid.interval(1.0, 64)


def bump_state(grid, p_amp=0.3, c_amp=0.3, w_amp=0.3):
    x = grid.centers()
    return State.from_fields(1 + p_amp * np.cos(np.pi * x), 0.5 + c_amp * np.cos(2 * np.pi * x),
                             0.6 + w_amp * np.cos(np.pi * x))


@pytest.fixture
def bump64(grid64):
    return bump_state(grid64)
