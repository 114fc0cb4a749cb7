import io
import math

import numpy as np
import pytest

from finslerflat import ConvexityError, DomainError
from finslerflat.geometry import (
    GeodesicTrace,
    dual_potential_check,
    energy_drift,
    fundamental_tensor,
    geodesic_integrate,
    projective_factor,
    spray_coefficients,
    straightness_residual,
    write_trace_csv,
)
from finslerflat.jets import sqrt
from finslerflat.metrics import MetricSpec, SamplePoint, finsler_eval, sample_domain

FLAT = [MetricSpec.funk(), MetricSpec.family(2, 0.5), MetricSpec.family(4, 2),
        MetricSpec.family(1, -1)]


def test_euclidean_tensor_and_spray():
    spec = MetricSpec.euclidean()
    p = SamplePoint(np.array([0.3, -2.0, 1.0]), np.array([1.0, 2.0, -0.5]))
    gt = fundamental_tensor(spec, p)
    np.testing.assert_allclose(gt.g, np.eye(3), atol=1e-15)
    assert gt.min_eig == pytest.approx(1.0)
    assert not spray_coefficients(spec, p).any()
    assert projective_factor(spec, p) == (0.0, 0.0)
    assert dual_potential_check(spec, p) == (0.0, 0.0)


def test_funk_tensor_positive_definite():
    gt = fundamental_tensor(MetricSpec.funk(), SamplePoint(np.array([0.3, 0, 0.0]),
                                                          np.array([1.0, 0, 0])))
    assert gt.min_eig > 0


@pytest.mark.parametrize("spec", FLAT + [MetricSpec.perturbed()], ids=str)
def test_tensor_invariants(spec):
    for p in sample_domain(spec, 4, 100):
        gt = fundamental_tensor(spec, p)
        np.testing.assert_allclose(gt.g @ gt.ginv, np.eye(spec.dim), atol=1e-10)
        F = finsler_eval(spec, p)
        assert abs(p.y @ gt.g @ p.y - F * F) <= 1e-10 * F * F


def test_nonconvex_metric_raises():
    spec = MetricSpec.custom(lambda r, u, v: sqrt(u * u - 2 * v * v),
                             lambda r, u, v: u * u - 2 * v * v > 0, dim=2, radius=1.0)
    p = SamplePoint(np.array([0.9, 0.0]), np.array([0.0, 1.0]))
    with pytest.raises(ConvexityError) as info:
        fundamental_tensor(spec, p)
    assert info.value.min_eig == pytest.approx(1 - 2 * 0.81)


@pytest.mark.parametrize("spec", FLAT, ids=str)
def test_spray_is_half_c_F_y(spec):
    for p in sample_domain(spec, 8, 100):
        G = spray_coefficients(spec, p)
        F = finsler_eval(spec, p)
        target = 0.5 * spec.c * F * p.y
        assert np.max(np.abs(G - target)) <= 1e-9 * np.max(np.abs(target))
        P, res = projective_factor(spec, p)
        assert res <= 1e-9
        assert abs(P - 0.5 * spec.c * F) <= 1e-9 * abs(P)
        _, dres = dual_potential_check(spec, p)
        assert dres <= 1e-8


@pytest.mark.parametrize("spec", FLAT + [MetricSpec.perturbed()], ids=str)
def test_spray_two_homogeneous(spec):
    for p in sample_domain(spec, 6, 100):
        G = spray_coefficients(spec, p)
        for lam in (0.5, 2.0):
            Gl = spray_coefficients(spec, SamplePoint(p.x, lam * p.y))
            assert np.max(np.abs(Gl - lam * lam * G)) <= 1e-10 * max(1.0, lam * lam * np.abs(G).max())


def test_perturbed_is_not_projective():
    spec = MetricSpec.perturbed()
    worst_p = max(projective_factor(spec, p)[1] for p in sample_domain(spec, 1, 100))
    worst_d = max(dual_potential_check(spec, p)[1] for p in sample_domain(spec, 1, 100))
    assert worst_p > 1e-3
    assert worst_d > 1e-3


def test_euclidean_geodesic_exact():
    tr = geodesic_integrate(MetricSpec.euclidean(dim=2), [0.0, 0.0], [1.0, 0.0], 1.0, 1e-3)
    assert not tr.truncated
    assert tr.t[-1] == 1.0
    assert np.max(np.abs(tr.x[-1] - [1.0, 0.0])) <= 1e-12
    assert straightness_residual(tr) <= 1e-12


def test_funk_geodesic_straight():
    spec = MetricSpec.funk(dim=2)
    tr = geodesic_integrate(spec, [0.1, 0.0], [0.5, 0.5], 0.5, 1e-3)
    assert not tr.truncated
    assert np.all(np.linalg.norm(tr.x, axis=1) < 1)
    assert straightness_residual(tr) <= 1e-6
    assert energy_drift(tr) <= 1e-6


def test_funk_geodesic_toward_boundary_stays_inside():
    # exact solution x(t) = x0 + y0 (1 - exp(-F0 t)) / F0 only reaches |x| = 1 as t -> inf
    spec = MetricSpec.funk(dim=2)
    tr = geodesic_integrate(spec, [0.95, 0.0], [1.0, 0.0], 0.2, 1e-3)
    F0 = finsler_eval(spec, SamplePoint(np.array([0.95, 0.0]), np.array([1.0, 0.0])))
    assert F0 == pytest.approx(20.0)
    exact = 0.95 + (1 - math.exp(-F0 * 0.2)) / F0
    assert abs(tr.x[-1, 0] - exact) <= 1e-9
    assert not tr.truncated


def test_reversed_family_geodesic_exits():
    # c < 0 accelerates: x(t) = x0 + y0 (exp(F0 t) - 1) / F0 hits |x| = 1 at finite t
    spec = MetricSpec.family(1, -1, dim=2)
    x0, y0 = np.array([0.95, 0.0]), np.array([1.0, 0.0])
    F0 = finsler_eval(spec, SamplePoint(x0, y0))
    t_exit = math.log(1 + 0.05 * F0) / F0
    tr = geodesic_integrate(spec, x0, y0, 1.0, 1e-3)
    assert tr.truncated
    assert tr.messages
    assert t_exit - 2e-3 <= tr.t[-1] <= t_exit


def test_geodesic_bad_start():
    with pytest.raises(DomainError):
        geodesic_integrate(MetricSpec.funk(dim=2), [1.1, 0.0], [1.0, 0.0], 0.1)
    with pytest.raises(ValueError):
        geodesic_integrate(MetricSpec.funk(dim=2), [0.1, 0.0], [1.0, 0.0], 0.1, step=0.0)


def test_straightness_of_circle_arc():
    ang = np.linspace(0, math.pi / 2, 10)
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    # nearest samples to the arc midpoint sit 5 degrees off it
    expected = (math.cos(math.pi / 36) - math.cos(math.pi / 4)) / (2 * math.sin(math.pi / 4))
    got = straightness_residual(pts)
    assert got == pytest.approx(expected, rel=1e-12)
    assert got > 0.05


def test_straightness_needs_three_states():
    with pytest.raises(ValueError):
        straightness_residual(np.zeros((2, 2)))


def test_trace_csv():
    tr = geodesic_integrate(MetricSpec.funk(dim=2), [0.1, 0.0], [0.5, 0.5], 0.003, 1e-3)
    buf = io.StringIO()
    write_trace_csv(tr, buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "t,x1,x2,xd1,xd2"
    assert lines[-1] == ""
    assert len(lines) == len(tr) + 2
    row = [float(v) for v in lines[2].split(",")]
    assert row[0] == tr.t[1]
    assert row[1:3] == tr.x[1].tolist()
    assert row[3:] == tr.xdot[1].tolist()
    assert isinstance(tr, GeodesicTrace) and len(tr.states) == len(tr)
