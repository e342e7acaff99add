import numpy as np
import pytest

from npspec import shapes
from npspec.laurent import LaurentMap


def library_shapes():
    """Representative maps from every generator (full spectra available)."""
    return {
        "disk": shapes.disk(1.3),
        "ellipse": shapes.ellipse(2.0, 1.0),
        "algebraic3": shapes.algebraic(3, 0.2),
        "fourier5": shapes.fourier_example(5, 0.6),
        "ngon4": shapes.regular_ngon(4, order=64),
        "smooth6": shapes.named_example("SMOOTH6"),
        "family4": shapes.named_example("FAMILY4", 20),
        "family3": shapes.named_example("FAMILY3", 60),
        "family2": shapes.named_example("FAMILY2", 5),
        "shifted": LaurentMap(gamma=0.8, a0=0.3 - 0.2j, a=[0.1 + 0.05j, 0.02j, -0.01]),
    }


@pytest.fixture(params=sorted(library_shapes()))
def library_map(request):
    return library_shapes()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
