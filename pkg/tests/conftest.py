import numpy as np
import pytest

from hlawka.linalg import HermitianMatrix, PdSampleConfig, random_pd
from hlawka.util import derive_seed


def pd_tuple(seed: int, count: int, dim: int, condition_target: float = 10.0):
    """Seeded PD tuple matching the harness's sampling scheme."""
    return [
        random_pd(PdSampleConfig(dim=dim, seed=derive_seed(seed, i), condition_target=condition_target))
        for i in range(count)
    ]


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianMatrix:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianMatrix((z + z.conj().T) / 2)


def input_scale(mats) -> float:
    """Largest infinity norm among the inputs."""
    return max(float(np.linalg.norm(m.array, np.inf)) for m in mats)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
