import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finslerflat import DomainError, NonSmoothError
from finslerflat.jets import Jet2, constant, fd_oracle, jet_arith, seed_variable, sqrt, variables
from finslerflat.metrics import MetricSpec, SamplePoint, finsler_eval, finsler_jet


def test_seed_variable():
    j = seed_variable(0, 4.0, 2)
    assert j.value == 4.0
    assert j.grad.tolist() == [1.0, 0.0]
    assert not j.hess.any()

    j = seed_variable(1, -0.5, 3)
    assert j.value == -0.5
    assert j.grad.tolist() == [0.0, 1.0, 0.0]


@pytest.mark.parametrize("index", [3, -1])
def test_seed_variable_out_of_range(index):
    with pytest.raises(ValueError):
        seed_variable(index, 1.0, 2)


def test_sqrt_jet():
    j = sqrt(seed_variable(0, 4.0, 1))
    assert j.value == 2.0
    assert j.grad[0] == 0.25
    assert j.hess[0, 0] == -0.03125


def test_product_rule():
    x0, x1 = variables([2.0, 3.0])
    j = jet_arith(x0, x1, "mul")
    assert j.value == 6.0
    assert j.grad.tolist() == [3.0, 2.0]
    assert j.hess.tolist() == [[0.0, 1.0], [1.0, 0.0]]


@pytest.mark.parametrize("value", [-1.0, 0.0])
def test_sqrt_domain(value):
    with pytest.raises(DomainError) as info:
        sqrt(seed_variable(0, value, 1))
    assert info.value.value == value
    with pytest.raises(DomainError):
        sqrt(value)


def test_division_by_zero():
    x, y = variables([1.0, 0.0])
    with pytest.raises(DomainError):
        x / y
    with pytest.raises(DomainError):
        jet_arith(x, 0.0, "div")


def test_named_operations_match_operators():
    a, b = variables([1.5, -0.7])
    for op, expect in [("add", a + b), ("sub", a - b), ("mul", a * b), ("div", a / b)]:
        got = jet_arith(a, b, op)
        assert got.value == expect.value
        np.testing.assert_array_equal(got.grad, expect.grad)
        np.testing.assert_array_equal(got.hess, expect.hess)
    cube = jet_arith(a, 3, "pow_int")
    assert cube.value == pytest.approx(1.5**3)
    assert cube.grad[0] == pytest.approx(3 * 1.5**2)
    assert cube.hess[0, 0] == pytest.approx(6 * 1.5)
    assert jet_arith(a, 2.0, "scale").grad[0] == 2.0
    with pytest.raises(ValueError):
        jet_arith(a, b, "exp")


def test_mismatched_variable_counts():
    with pytest.raises(ValueError):
        seed_variable(0, 1.0, 2) + seed_variable(0, 1.0, 3)


def test_quotient_and_reciprocal():
    # d/dx (1/x) = -1/x^2, d2 = 2/x^3
    (x,) = variables([2.0])
    j = 1.0 / x
    assert j.value == 0.5
    assert j.grad[0] == -0.25
    assert j.hess[0, 0] == 0.25


def test_negative_integer_power():
    (x,) = variables([2.0])
    j = x**-2
    assert j.value == 0.25
    assert j.grad[0] == pytest.approx(-2 / 8)
    assert j.hess[0, 0] == pytest.approx(6 / 16)
    assert (x**0).value == 1.0


coef = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_quadratic_polynomials_exact(m, data):
    z = np.array(data.draw(st.lists(coef, min_size=m, max_size=m)))
    a = data.draw(coef)
    b = np.array(data.draw(st.lists(coef, min_size=m, max_size=m)))
    A = np.array(data.draw(st.lists(coef, min_size=m * m, max_size=m * m))).reshape(m, m)
    A = 0.5 * (A + A.T)
    zs = variables(z)
    J = constant(a, m)
    for i in range(m):
        J = J + b[i] * zs[i]
        for j in range(m):
            J = J + A[i, j] * (zs[i] * zs[j])
    scale = max(1.0, np.abs(A).max(), np.abs(b).max()) * max(1.0, np.abs(z).max()) ** 2
    assert abs(J.value - (a + b @ z + z @ A @ z)) <= 1e-14 * scale * m * m
    np.testing.assert_allclose(J.grad, b + 2 * A @ z, rtol=0, atol=1e-14 * scale * m * m)
    np.testing.assert_allclose(J.hess, 2 * A, rtol=0, atol=1e-14 * scale * m * m)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.2, 3.0), min_size=3, max_size=3))
def test_hessian_exactly_symmetric(vals):
    x, y, z = variables(vals)
    j = sqrt(x * y + z) / (x - 4.0 * z) + (y**3) * z
    assert np.array_equal(j.hess, j.hess.T)


def test_deterministic():
    spec = MetricSpec.funk()
    p = SamplePoint(np.array([0.2, -0.1, 0.3]), np.array([1.0, 0.4, -0.2]))
    a, b = finsler_jet(spec, p), finsler_jet(spec, p)
    assert a.value == b.value
    assert np.array_equal(a.grad, b.grad) and np.array_equal(a.hess, b.hess)


def test_fd_quadratic():
    g, H = fd_oracle(lambda z: z[0] ** 2, [3.0], 1e-4)
    assert abs(g[0] - 6.0) <= 1e-7
    assert abs(H[0, 0] - 2.0) <= 1e-4


def test_fd_matches_jet_on_funk():
    spec = MetricSpec.funk(dim=2)
    x, y = np.array([0.1, 0.0]), np.array([1.0, 0.5])
    J = finsler_jet(spec, SamplePoint(x, y))
    g, _ = fd_oracle(lambda z: finsler_eval(spec, SamplePoint(z[:2], z[2:])),
                     np.concatenate([x, y]), 1e-5)
    assert np.max(np.abs(g - J.grad)) <= 1e-6 * np.max(np.abs(J.grad))


def test_fd_flags_kink():
    with pytest.raises(NonSmoothError):
        fd_oracle(lambda z: abs(z[0]), [0.0], 1e-5)


def test_fd_reports_stencil_leaving_domain():
    with pytest.raises(DomainError) as info:
        fd_oracle(lambda z: math.sqrt(z[0]) if z[0] > 0 else sqrt(z[0]), [5e-6], 1e-5)
    assert "offset" in str(info.value)


def test_fd_rejects_bad_step():
    with pytest.raises(ValueError):
        fd_oracle(lambda z: z[0], [1.0], 0.0)


def test_repr_and_m():
    j = seed_variable(0, 1.0, 3)
    assert j.m == 3
    assert "Jet2" in repr(j)
    assert isinstance(-j, Jet2) and (-j).value == -1.0
