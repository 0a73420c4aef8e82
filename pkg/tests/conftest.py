import numpy as np
import pytest

from zeckarith import core


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EC)


def dstr(seq) -> str:
    """Non-stripping digit formatter for working sequences."""
    return core.digits_to_string(seq)


def zstr(seq) -> str:
    return core.zeck_to_string(seq)
