import math

import numpy as np
import pytest

from twopiece.numerics import QuadratureSpec, integrate

SIGMA_GRID = (0.1, 0.5, 1.0, 2.0, 10.0)
TIGHT = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-13, max_subdivisions=5000)


def quad(f, lo=-math.inf, hi=math.inf, points=(), abs_tol=None):
    """Quadrature oracle used throughout the tests."""
    spec = TIGHT if abs_tol is None else QuadratureSpec(abs_tol, 1e-13, 5000)
    return integrate(f, lo, hi, spec, points=points)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240611))
