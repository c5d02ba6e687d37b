import numpy as np
import pytest

from fracdim import make_affine_spec, make_anchor, solve_fixed_point


@pytest.fixture(scope="session")
def tent_half_spec():
    """Tent data with alpha = 0.5 on both branches (dyadic, exact arithmetic)."""
    return make_affine_spec([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], [0.5, 0.5])


@pytest.fixture(scope="session")
def tent_half_fif(tent_half_spec):
    return solve_fixed_point(tent_half_spec, m=2 ** 16, tol=1e-10)


@pytest.fixture(scope="session")
def anchor_15_fine():
    """Dimension-1.5 anchor at full box-counting resolution."""
    return make_anchor(1.5, m=2 ** 20, tol=1e-8)


@pytest.fixture(scope="session")
def rough_15_fine():
    """Affine fixed point with predicted dimension 1.5 at m = 2^20."""
    a = 2.0 ** -0.5
    spec = make_affine_spec([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], [a, a])
    return solve_fixed_point(spec, m=2 ** 20, tol=1e-8)
