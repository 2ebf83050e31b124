import numpy as np
import pytest

from harmcross.fixtures import disc_arcs_by_angle, slit_faces, slit_square, unit_disc


@pytest.fixture(scope="session")
def disc():
    return unit_disc()


@pytest.fixture(scope="session")
def square():
    return slit_square()


@pytest.fixture(scope="session")
def half_arc(disc):
    return disc_arcs_by_angle(disc, [(0.0, np.pi)])


@pytest.fixture(scope="session")
def slit_quarter():
    # both faces of the middle half of the slit: the segment (-1/4, 1/4)
    return slit_faces(0.25, 0.75)
