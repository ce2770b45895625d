import numpy as np
import pytest
from hypothesis import settings

from contact_cwc import ContactPatch

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def unit_patch():
    return ContactPatch(1.0, 1.0, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_forces(rng, n, mu):
    """(n, 4, 3) corner forces inside their friction pyramids."""
    fz = rng.uniform(0.0, 2.0, (n, 4))
    fx = rng.uniform(-1.0, 1.0, (n, 4)) * mu * fz
    fy = rng.uniform(-1.0, 1.0, (n, 4)) * mu * fz
    return np.stack([fx, fy, fz], axis=2)
