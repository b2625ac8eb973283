from typing import Callable

import numpy as np
import pytest

from fockleray.fock import VectorField
from fockleray.ncpoly import NcPolynomial
from fockleray.verify import random_field as _random_field
from fockleray.verify import random_polynomial as _random_polynomial


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def random_field(rng: np.random.Generator) -> Callable[..., VectorField]:
    def _make(n: int = 2, k: int = 2, max_terms: int = 6) -> VectorField:
        return _random_field(n, k, rng, max_terms)

    return _make


@pytest.fixture
def random_polynomial(rng: np.random.Generator) -> Callable[..., NcPolynomial]:
    def _make(n: int = 2, degree_cap: int = 4) -> NcPolynomial:
        return _random_polynomial(n, degree_cap, rng)

    return _make
