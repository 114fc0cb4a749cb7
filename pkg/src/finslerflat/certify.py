"""Pointwise residuals of the flatness conditions and their aggregation.

Every evaluator returns a non-negative number that vanishes (to roundoff)
when the condition holds at the given point.  Ambient conditions are
normalised by ``max(1, |gradient|)`` so one tolerance serves all metric
scales.  :func:`aggregate` runs an evaluator over seeded samples and fills a
:class:`CertReport`.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvexityError, DomainError, EstimationError
from .geometry import dual_potential_check, fundamental_tensor, projective_factor
from .jets import variables
from .metrics import (
    MetricSpec,
    SamplePoint,
    f_solution,
    finsler_eval,
    finsler_jet,
    phi,
    psi_of,
    sample_domain,
)
from .quadrature import adaptive_simpson

__all__ = [
    "CertReport",
    "rapcsak_residual",
    "dualflat_residual",
    "coupled_residual",
    "estimate_c",
    "psi_pde_lhs",
    "psi_pde_residual",
    "psi_reduction_protocol",
    "identity_suite",
    "ode_residual",
    "quadrature_reconstruction_check",
    "convexity_scan",
    "CONDITIONS",
    "aggregate",
    "reports_to_json",
]


@dataclass(frozen=True)
class CertReport:
    condition: str
    samples: int
    max_abs: float
    mean_abs: float
    tol: float
    passed: bool
    seed: int
    spec: dict

    def to_dict(self):
        return {
            "condition": self.condition,
            "samples": self.samples,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "tol": self.tol,
            "pass": self.passed,
            "seed": self.seed,
            "spec": self.spec,
        }


def _json_value(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_value(str(k), indent, level + 1)}: "
                 f"{_json_value(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _json_value(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with every float written to 17 significant digits.

    Non-finite floats are written as ``Infinity``/``NaN`` (as Python's json
    module does) so failed samples survive a round trip.
    """
    return _json_value(obj, indent, 0) + "\n"


def reports_to_json(reports):
    return dumps([r.to_dict() for r in reports])


# -- ambient conditions ------------------------------------------------------


def _ambient(spec, p):
    F = finsler_jet(spec, p)
    n = spec.dim
    return F, n, np.asarray(p.y, dtype=float)


def rapcsak_residual(spec: MetricSpec, p: SamplePoint) -> float:
    """max_l |F_{x^k y^l} y^k - F_{x^l}| / max(1, |F_x|)."""
    F, n, y = _ambient(spec, p)
    F_x = F.grad[:n]
    lhs = F.hess[:n, n:].T @ y
    return float(np.max(np.abs(lhs - F_x)) / max(1.0, np.linalg.norm(F_x)))


def _dualflat_vector(spec, p):
    F, n, y = _ambient(spec, p)
    F2 = F * F
    d_x = F2.grad[:n]
    return F2.hess[:n, n:].T @ y - 2.0 * d_x, d_x


def dualflat_residual(spec: MetricSpec, p: SamplePoint) -> float:
    """max_l |[F^2]_{x^m y^l} y^m - 2 [F^2]_{x^l}| / max(1, |[F^2]_x|)."""
    vec, d_x = _dualflat_vector(spec, p)
    return float(np.max(np.abs(vec)) / max(1.0, np.linalg.norm(d_x)))


def coupled_residual(spec: MetricSpec, c: float, p: SamplePoint) -> float:
    """max_k |F_{x^k} - c F F_{y^k}| / max(1, |F_x|)."""
    F, n, _ = _ambient(spec, p)
    F_x = F.grad[:n]
    F_y = F.grad[n:]
    return float(np.max(np.abs(F_x - c * F.value * F_y)) / max(1.0, np.linalg.norm(F_x)))


def estimate_c(spec, points, min_denominator=1e-6):
    """Least-squares constant c in F_{x^k} = c F F_{y^k} over all points and k.

    Returns ``(c_hat, spread)`` where spread is the largest deviation of the
    per-component ratio from ``c_hat`` among components whose denominator
    exceeds ``min_denominator``.
    """
    points = list(points)
    if len(points) < 10:
        raise ValueError("estimate_c needs at least 10 points")
    num, den = [], []
    for p in points:
        F, n, _ = _ambient(spec, p)
        num.append(F.grad[:n])
        den.append(F.value * F.grad[n:])
    a = np.concatenate(num)
    b = np.concatenate(den)
    keep = np.abs(b) > min_denominator
    if not keep.any():
        raise EstimationError("all denominators F F_y are negligible")
    c_hat = float(a @ b / (b @ b))
    spread = float(np.max(np.abs(a[keep] / b[keep] - c_hat)))
    return c_hat, spread


# -- reduced (psi) form --------------------------------------------------------


def psi_pde_lhs(psi, r, s):
    """s (psi_r psi_s + psi psi_rs) + r (psi_s^2 + psi psi_ss) - 2 psi psi_r.

    ``psi`` is any callable of two arguments that accepts jets.
    """
    rr, ss = variables([r, s])
    J = psi(rr, ss)
    if not hasattr(J, "grad"):  # constant psi
        return 0.0
    p0 = J.value
    p_r, p_s = J.grad
    p_rs, p_ss = J.hess[0, 1], J.hess[1, 1]
    return float(s * (p_r * p_s + p0 * p_rs) + r * (p_s * p_s + p0 * p_ss) - 2.0 * p0 * p_r)


def psi_pde_residual(spec: MetricSpec, r: float, s: float) -> float:
    """Left side of the reduced dual-flatness PDE for psi(r, s) = phi(r, 1, s)."""
    if not r > 0:
        raise DomainError("psi PDE requires r > 0", value=r)
    return psi_pde_lhs(lambda a, b: psi_of(spec, a, b), r, s)


def psi_reduction_protocol(spec=None, seed=42, count=1000, tol=1e-9, control=None,
                           margin=0.1):
    """Cross-validate the reduced PDE against the ambient dual-flatness condition.

    By the chain rule, the ambient residual vector of a spherically symmetric
    metric factors as

        [F^2]_{x^m y^l} y^m - 2 [F^2]_{x^l} = (2 u^2 / r) E (x - (v / u^2) y)

    with E the reduced left side at ``(r, s = v/u)``.  The protocol checks that
    E vanishes on ``spec`` where the ambient residual does, and that the
    factorisation holds on a non-flat ``control`` where both are large.
    """
    spec = MetricSpec.funk() if spec is None else spec
    control = MetricSpec.perturbed(dim=spec.dim) if control is None else control

    def run(metric):
        lits, ambs, mism, scale = [], [], [], []
        for p in sample_domain(metric, seed, count, margin):
            r, u, v, s = p.r, p.u, p.v, p.s
            E = psi_pde_residual(metric, r, s)
            vec, d_x = _dualflat_vector(metric, p)
            pred = (2.0 * u * u / r) * E * (p.x - (v / (u * u)) * p.y)
            lits.append(abs(E))
            ambs.append(float(np.max(np.abs(vec)) / max(1.0, np.linalg.norm(d_x))))
            mism.append(float(np.max(np.abs(vec - pred))))
            scale.append(float(np.max(np.abs(vec))))
        return np.array(lits), np.array(ambs), np.array(mism), np.array(scale)

    lit, amb, _, _ = run(spec)
    clit, camb, cmis, cscale = run(control)
    factor_rel = float(np.max(cmis / np.maximum(cscale, 1e-300)))
    literal_ok = bool(lit.max() <= tol and amb.max() <= tol)
    factor_ok = bool(factor_rel <= 1e-8 and clit.max() > 1e3 * tol)
    if literal_ok and factor_ok:
        verdict = "literal reduced PDE vanishes where the ambient condition does"
    else:
        verdict = "literal reduced PDE is not consistent with the ambient condition"
    return {
        "metric": spec.summary(),
        "control": control.summary(),
        "points": int(count),
        "seed": int(seed),
        "tol": float(tol),
        "literal_max_abs": float(lit.max()),
        "ambient_max_abs": float(amb.max()),
        "control_literal_max_abs": float(clit.max()),
        "control_ambient_max_abs": float(camb.max()),
        "factorisation_max_rel": factor_rel,
        "literal_holds": literal_ok,
        "factorisation_holds": factor_ok,
        "verdict": verdict,
    }


# -- classification chain ------------------------------------------------------


def _default_f(spec):
    return lambda t: f_solution(t, spec.c, spec.k)


def identity_suite(spec, p, f=None):
    """Residuals of the identities linking phi, its partials and f.

    Evaluated with jets in ``(r, u, v)``; each residual is divided by
    ``|phi|``.  ``f`` defaults to the closed-form generator of the family and
    may be replaced to build negative controls.
    """
    if spec.kind not in ("family", "funk"):
        raise ValueError("identity_suite applies to the classified family only")
    f = _default_f(spec) if f is None else f
    c = spec.c
    r, u, v = p.r, p.u, p.v
    rr, uu, vv = variables([r, u, v])
    J = phi(spec, rr, uu, vv)
    ph = J.value
    ph_r, ph_u, ph_v = J.grad
    t = v * v / (u * u) - r * r
    ft = f(t)
    (tj,) = variables([t])
    fprime = f(tj).grad[0]
    den = u - c * ft * v
    if not den > 0.0:
        raise DomainError("u - c f v <= 0", value=den)
    scale = abs(ph)
    return {
        "phi_r_coupling": abs(ph_r / r - c * ph * ph_v) / scale,
        "phi_v_coupling": abs(ph_v - c * ph * ph_u / u) / scale,
        "phi_u_generator": abs(ph_u - ft) / scale,
        "euler_homogeneity": abs(ph - ph_u * u - ph_v * v) / scale,
        "explicit_phi": abs(ph - ft * u * u / den) / scale,
        "phi_r_closed": abs(ph_r / r + 2.0 * fprime * u**3 / den**2) / scale,
    }


def ode_residual(c, k, t_grid, f=None):
    """max over the grid of |2 f'(t) + c^2 f(t)^3| with f' by forward AD."""
    f = (lambda t: f_solution(t, c, k)) if f is None else f
    worst = 0.0
    for t in t_grid:
        (tj,) = variables([t])
        J = f(tj)
        worst = max(worst, abs(2.0 * J.grad[0] + c * c * J.value**3))
    return float(worst)


def quadrature_reconstruction_check(spec, r, v, u1, u2, f=None, abs_tol=1e-10):
    """|int_{u1}^{u2} f(v^2/t^2 - r^2) dt - (phi(r, u2, v) - phi(r, u1, v))|.

    The unknown g(r) v term of the integral representation cancels in the
    difference.
    """
    if not 0 < u1 < u2:
        raise ValueError("need 0 < u1 < u2")
    if abs(v) > r * u1 * (1 + 1e-12):
        raise DomainError("|v| > r u on part of [u1, u2]", value=v)
    f = _default_f(spec) if f is None else f
    integral = adaptive_simpson(lambda t: f(v * v / (t * t) - r * r), u1, u2, abs_tol)
    diff = phi(spec, r, u2, v) - phi(spec, r, u1, v)
    return float(abs(integral - diff))


# -- convexity -----------------------------------------------------------------


def convexity_scan(spec, seed=42, count=1000, margin=0.1):
    """Smallest eigenvalue of g over samples, with the points where g fails."""
    worst = math.inf
    failures = []
    for i, p in enumerate(sample_domain(spec, seed, count, margin)):
        try:
            worst = min(worst, fundamental_tensor(spec, p).min_eig)
        except ConvexityError as exc:
            worst = min(worst, exc.min_eig)
            failures.append({"index": i, "x": p.x.tolist(), "y": p.y.tolist(),
                             "min_eig": exc.min_eig})
    return {"metric": spec.summary(), "samples": count, "min_eig": float(worst),
            "convex": not failures, "failures": failures}


# -- aggregation ---------------------------------------------------------------


def _spray_factor(spec, p):
    P, _ = projective_factor(spec, p)
    F = finsler_eval(spec, p)
    target = 0.5 * spec.c * F
    return abs(P - target) / max(abs(P), 1e-300) if P != 0 else abs(target)


def _convexity(spec, p):
    fundamental_tensor(spec, p)
    return 0.0


CONDITIONS = {
    "rapcsak": lambda spec, p, c: rapcsak_residual(spec, p),
    "dualflat": lambda spec, p, c: dualflat_residual(spec, p),
    "coupled": lambda spec, p, c: coupled_residual(spec, c, p),
    "projective_factor": lambda spec, p, c: projective_factor(spec, p)[1],
    "spray_factor": lambda spec, p, c: _spray_factor(spec, p),
    "dual_potential": lambda spec, p, c: dual_potential_check(spec, p)[1],
    "psi_pde": lambda spec, p, c: abs(psi_pde_residual(spec, p.r, p.s)),
    "identities": lambda spec, p, c: max(identity_suite(spec, p).values()),
    "convexity": lambda spec, p, c: _convexity(spec, p),
}


def aggregate(condition, spec, seed=42, count=1000, tol=1e-9, margin=0.1, c=None):
    """Run a registered condition over ``sample_domain(spec, seed, count, margin)``.

    ``c`` is the coupling constant for ``coupled`` (default ``spec.c``).
    A sample whose evaluation raises a domain or convexity error counts as an
    infinite residual.
    """
    try:
        evaluator = CONDITIONS[condition]
    except KeyError:
        raise ValueError(f"unknown condition {condition!r}") from None
    if c is None:
        c = spec.c
    values = np.empty(count)
    for i, p in enumerate(sample_domain(spec, seed, count, margin)):
        try:
            values[i] = evaluator(spec, p, c)
        except (DomainError, ConvexityError):
            values[i] = math.inf
    max_abs = float(values.max())
    name = f"coupled(c={format(float(c), '.17g')})" if condition == "coupled" else condition
    return CertReport(
        condition=name,
        samples=int(count),
        max_abs=max_abs,
        mean_abs=float(values.mean()),
        tol=float(tol),
        passed=bool(max_abs <= tol),
        seed=int(seed),
        spec=spec.summary(),
    )
