import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from closurelab import _accel
from closurelab.closure import canonicalize
from closurelab.core import FdFunction, Universe
from closurelab.flats import from_facets

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

NAMES = "abcdefgh"


def universe(n):
    return Universe(NAMES[:n])


@st.composite
def fd_functions(draw, min_n=1, max_n=5, max_pairs=6, canonical=True):
    n = draw(st.integers(min_n, max_n))
    u = universe(n)
    full = u.full_mask
    raw = draw(st.lists(st.tuples(st.integers(0, full), st.integers(0, full)), max_size=max_pairs))
    if canonical:
        return canonicalize(raw, universe=u)
    return FdFunction(u, raw, merge=True)


@st.composite
def hereditary(draw, min_n=1, max_n=5, max_facets=4):
    n = draw(st.integers(min_n, max_n))
    u = universe(n)
    facets = draw(st.lists(st.integers(0, u.full_mask), max_size=max_facets))
    return from_facets(u, facets)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba" and not _accel.HAVE_NUMBA:
        pytest.skip("numba not installed")
    with _accel.use_backend(request.param):
        yield request.param
