import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from amou_k0.amou import Algebra

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ALGEBRAS = [Algebra(b) for b in [(1,), (2,), (3,), (1, 2), (2, 3)]]

algebras = st.sampled_from(ALGEBRAS)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
levels = st.integers(min_value=1, max_value=3)


def random_matrix(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def random_hermitian(rng, n):
    x = random_matrix(rng, n, n)
    return 0.5 * (x + x.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
