import random

import pytest
from hypothesis import HealthCheck, settings

from varsmooth.fields import QQ, GF
from varsmooth.poly import Polynomial
from varsmooth.ring import Ring

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rxy():
    return Ring(QQ, ("x", "y"))


@pytest.fixture
def rxyz():
    return Ring(QQ, ("x", "y", "z"))


def variables(ring):
    return [Polynomial.variable(ring, i) for i in range(ring.nvars)]


def random_poly(ring, rng, max_terms=5, max_deg=3, coeff_bound=4):
    """Small random polynomial with integer coefficients; may be zero."""
    f = Polynomial.zero(ring)
    for _ in range(rng.randint(1, max_terms)):
        c = rng.randint(-coeff_bound, coeff_bound)
        if not c:
            continue
        exps = [0] * ring.nvars
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(ring.nvars)] += 1
        f = f + Polynomial.from_terms(ring, [(tuple(exps), c)])
    return f


def nonzero_random_poly(ring, rng, **kw):
    while True:
        f = random_poly(ring, rng, **kw)
        if not f.is_zero():
            return f
