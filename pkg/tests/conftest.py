import numpy as np
import pytest

import foamlab as fl


@pytest.fixture(scope="session")
def double():
    return fl.double_bubble(1.0, 0.6)


@pytest.fixture(scope="session")
def triple():
    return fl.triple_bubble()


@pytest.fixture(scope="session")
def four():
    return fl.four_bubble()


@pytest.fixture(scope="session")
def two_lens():
    return fl.two_lens()


@pytest.fixture(scope="session")
def necklace6():
    return fl.necklace(6)


@pytest.fixture(scope="session")
def necklace7():
    return fl.necklace(7)


@pytest.fixture(scope="session")
def flower():
    return fl.flower()


@pytest.fixture(scope="session")
def quasi_recurved():
    return fl.quasi_variant("two_lens_recurved")


@pytest.fixture(scope="session")
def quasi_stretched():
    return fl.quasi_variant("four_stretched")


@pytest.fixture(scope="session")
def equilibrium_presets(double, triple, four, two_lens, necklace6, necklace7, flower):
    return {
        "double": double,
        "triple": triple,
        "four": four,
        "two_lens": two_lens,
        "necklace6": necklace6,
        "necklace7": necklace7,
        "flower": flower,
    }


@pytest.fixture(scope="session")
def quasi_presets(quasi_recurved, quasi_stretched):
    return {
        "two_lens_recurved": quasi_recurved,
        "four_stretched": quasi_stretched,
    }


@pytest.fixture()
def rng():
    return np.random.default_rng(20260825)
