import math

import pytest
from scipy.integrate import quad

from finslerflat import QuadratureError
from finslerflat.quadrature import adaptive_simpson


@pytest.mark.parametrize(
    "f,a,b",
    [
        (math.sin, 0.0, math.pi),
        (math.exp, -1.0, 2.0),
        (lambda t: 1.0 / math.sqrt(1.0 + t * t), 0.5, 3.0),
        (lambda t: math.cos(10 * t) * math.exp(-t), 0.0, 4.0),
    ],
)
def test_against_scipy(f, a, b):
    ref, _ = quad(f, a, b, epsabs=1e-13, epsrel=1e-13)
    assert abs(adaptive_simpson(f, a, b, 1e-10) - ref) <= 1e-10


def test_cubic_exact():
    got = adaptive_simpson(lambda t: t**3 - 2 * t + 1, 0.0, 2.0)
    assert got == pytest.approx(4.0 - 4.0 + 2.0, abs=1e-13)


def test_empty_interval():
    assert adaptive_simpson(math.sin, 1.0, 1.0) == 0.0


def test_budget_exhausted():
    with pytest.raises(QuadratureError):
        adaptive_simpson(lambda t: math.sin(50 * t), 0.0, 10.0, 1e-14, max_evals=50)
