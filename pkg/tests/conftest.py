import numpy as np
import pytest

from socialtrack._backend import available_backends


@pytest.fixture(params=sorted(available_backends()))
def kernels(request):
    """Each importable kernel module in turn (compiled and pure Python)."""
    return available_backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
