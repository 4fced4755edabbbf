import numpy as np
import pytest

from pwpshrink import build_perceptual_tree, db10_filters, gen_test_signal, white_noise


@pytest.fixture(scope="session")
def tree():
    return build_perceptual_tree(8000, 6, 24)


@pytest.fixture(scope="session")
def filters():
    return db10_filters()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def vowel():
    return gen_test_signal("vowel", 2.0, 8000, seed=0)


@pytest.fixture(scope="session")
def noise(vowel):
    return white_noise(len(vowel), 8000, seed=1)
