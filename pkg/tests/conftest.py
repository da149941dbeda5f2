import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from dkcat.linalg import Field, Matrix

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

FIELDS = [Field.rationals(), Field.prime(2), Field.prime(3), Field.prime(5)]
PRIMES = [Field.prime(2), Field.prime(3), Field.prime(5)]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param


@pytest.fixture(params=PRIMES, ids=str)
def prime_field(request):
    return request.param


fields = st.sampled_from(FIELDS)
prime_fields = st.sampled_from(PRIMES)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def matrices(draw, k=None, max_rows=4, max_cols=4, rows=None, cols=None):
    k = k or draw(fields)
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    vals = draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(k, vals, shape=(r, c))


def rng_for(seed):
    return random.Random(seed)


# acceptance verdict lines, printed after the run even when output is captured
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
