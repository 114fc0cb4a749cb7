"""Checks of the jet arithmetic against finite differences and exact polynomials."""

from dataclasses import dataclass

import numpy as np

from .jets import fd_oracle, variables
from .metrics import ZOO, SamplePoint, finsler_eval, finsler_jet, sample_domain


@dataclass
class SelfTestResult:
    grad_rel: float
    hess_rel: float
    poly_rel: float
    worst: str
    grad_tol: float = 1e-6
    hess_tol: float = 1e-4
    poly_tol: float = 1e-14

    @property
    def ok(self):
        return (self.grad_rel <= self.grad_tol and self.hess_rel <= self.hess_tol
                and self.poly_rel <= self.poly_tol)


def _rel(a, b):
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def metric_fd_deviation(spec, points, h=1e-5, fault=0.0):
    """Worst relative gradient and Hessian gap between jets and finite differences."""
    n = spec.dim
    worst_g = worst_h = 0.0
    where = None
    for i, p in enumerate(points):
        J = finsler_jet(spec, p)

        def F(z):
            return finsler_eval(spec, SamplePoint(z[:n], z[n:]))

        g, H = fd_oracle(F, np.concatenate([p.x, p.y]), h)
        dg = _rel(J.grad + fault, g)
        dh = _rel(J.hess, H)
        if dg > worst_g:
            worst_g, where = dg, i
        worst_h = max(worst_h, dh)
    return worst_g, worst_h, where


def polynomial_exactness(seed=0, trials=200, max_vars=4):
    """Largest relative error of jets on random polynomials of degree <= 2."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, max_vars + 1))
        a = rng.uniform(-2, 2)
        b = rng.uniform(-2, 2, m)
        A = rng.uniform(-2, 2, (m, m))
        A = 0.5 * (A + A.T)
        z = rng.uniform(-2, 2, m)
        zs = variables(z)
        J = a + sum(b[i] * zs[i] for i in range(m))
        for i in range(m):
            for j in range(m):
                J = J + A[i, j] * (zs[i] * zs[j])
        exact_v = a + b @ z + z @ A @ z
        exact_g = b + 2 * A @ z
        exact_h = 2 * A
        scale = max(abs(exact_v), np.max(np.abs(exact_g)), np.max(np.abs(exact_h)), 1.0)
        err = max(abs(J.value - exact_v), np.max(np.abs(J.grad - exact_g)),
                  np.max(np.abs(J.hess - exact_h))) / scale
        worst = max(worst, float(err))
    return worst


def run_selftest(h=1e-5, count=100, seed=42, fault=False):
    """AD-vs-finite-difference over the metric zoo plus polynomial exactness.

    ``fault`` shifts every jet gradient by 1e-3 before comparison, to check
    that the harness itself can fail.
    """
    shift = 1e-3 if fault else 0.0
    worst_g = worst_h = 0.0
    worst = ""
    for name, spec in ZOO.items():
        pts = sample_domain(spec, seed, count)
        g, H, idx = metric_fd_deviation(spec, pts, h, shift)
        if g >= worst_g:
            worst_g, worst = g, f"{name} sample {idx}"
        worst_h = max(worst_h, H)
    poly = polynomial_exactness(seed)
    return SelfTestResult(worst_g, worst_h, poly, worst)
