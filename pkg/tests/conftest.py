import functools

import numpy as np
import pytest

from tritop import _fallback
from tritop import convolution as conv_mod
from tritop import inverse as inv_mod
from tritop import GeneratorSpec, fundamental, generate, invert

try:
    from tritop import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = {"python": _fallback}
if _kernels is not None:
    BACKENDS["cython"] = _kernels


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Route the public API through one kernel implementation."""
    mod = BACKENDS[request.param]
    monkeypatch.setattr(conv_mod, "kernels", mod)
    monkeypatch.setattr(inv_mod, "kernels", mod)
    return mod


@pytest.fixture
def rng():
    return np.random.default_rng(20131)


ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))


@functools.lru_cache(maxsize=None)
def power_law_family(alpha, n, method="newton"):
    """(a, b, u) for a_k = (1+k)^-alpha; shared across test modules."""
    a = generate(GeneratorSpec.power_law(alpha, n))
    b = invert(a, n, method).b
    return np.asarray(a), np.asarray(b), np.asarray(fundamental(a, b).u)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
