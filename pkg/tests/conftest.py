import numpy as np
import pytest

from levyburgers import GridSpec


def derived_seed(*key: int) -> int:
    """Deterministic 64-bit seed from an integer key tuple."""
    return int(np.random.SeedSequence(key).generate_state(1, dtype=np.uint64)[0])


@pytest.fixture(scope="session")
def grid_standard() -> GridSpec:
    """[-8, 8] with h = 2^-8, the workhorse grid of the statistical tests."""
    return GridSpec.symmetric(8.0, 4097)


@pytest.fixture(scope="session")
def grid_fixture() -> GridSpec:
    """[-4, 4] with h = 0.01, the grid of the closed-form fixtures."""
    return GridSpec.symmetric(4.0, 801)
