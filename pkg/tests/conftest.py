import numpy as np
import pytest
from hypothesis import settings

from gradshape.tensions import make_builtin

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SIGMA_MODELS = [
    ("trivial_example", ()),
    ("young_tableaux", ()),
    ("enharmonic", ()),
    ("p_laplace", (1.5,)),
    ("p_laplace", (2.0,)),
    ("p_laplace", (3.0,)),
    ("p_laplace", (4.0,)),
]


def interior_slopes(model, n, rng):
    """Random slopes well inside the model's domain."""
    if model.name == "young_tableaux":
        return rng.uniform(-0.45, 0.45, n), rng.uniform(0.2, 3.0, n)
    if model.name == "p_laplace":
        r, th = rng.uniform(0.3, 3.0, n), rng.uniform(-np.pi, np.pi, n)
        return r * np.cos(th), r * np.sin(th)
    if model.name == "dimer_square":
        s, t = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        return s, t * (1.0 - np.abs(s))
    return rng.uniform(0.3, 3.0, n), rng.uniform(0.3, 3.0, n)


@pytest.fixture(params=SIGMA_MODELS, ids=lambda m: f"{m[0]}{m[1] or ''}")
def sigma_model(request):
    return make_builtin(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
