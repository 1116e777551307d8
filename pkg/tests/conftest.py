import numpy as np
import pytest

from tricyclic.gf import field_context


@pytest.fixture(scope="session")
def ctx2():
    return field_context(3, 2)


@pytest.fixture(scope="session")
def ctx4():
    return field_context(3, 4)


@pytest.fixture(scope="session")
def ctx6():
    return field_context(3, 6)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


def random_triples(rng, q: int, n: int) -> list[tuple[int, int, int]]:
    draws = rng.integers(0, q, size=(n, 3))
    return [tuple(int(v) for v in row) for row in draws]
