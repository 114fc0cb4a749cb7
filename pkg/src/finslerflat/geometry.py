"""Fundamental tensor, spray, projective factor, dual potential and geodesics.

Derivatives come from a single :class:`~finslerflat.jets.Jet2` of F^2 in the
2n variables ``(x, y)``; index blocks ``[:n]`` are x-derivatives and ``[n:]``
are y-derivatives.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import ConvexityError, DomainError
from .metrics import MetricSpec, SamplePoint, finsler_eval, finsler_jet

__all__ = [
    "FundamentalTensor",
    "GeodesicTrace",
    "fundamental_tensor",
    "spray_coefficients",
    "projective_factor",
    "dual_potential_check",
    "geodesic_integrate",
    "straightness_residual",
    "energy_drift",
    "write_trace_csv",
]


@dataclass(frozen=True)
class FundamentalTensor:
    g: np.ndarray
    ginv: np.ndarray
    min_eig: float


def _f2_blocks(spec, p):
    F = finsler_jet(spec, p)
    F2 = F * F
    n = spec.dim
    d_x = F2.grad[:n]
    d_xy = F2.hess[:n, n:]  # d_xy[k, l] = d^2 F^2 / dx^k dy^l
    d_yy = F2.hess[n:, n:]
    return F.value, d_x, d_xy, d_yy


def _tensor_from_hessian(d_yy):
    g = 0.5 * d_yy
    min_eig = float(np.linalg.eigvalsh(g)[0])
    try:
        L = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise ConvexityError(
            f"fundamental tensor not positive definite (min eigenvalue {min_eig:.3e})",
            min_eig,
        ) from None
    Linv = np.linalg.inv(L)
    ginv = Linv.T @ Linv
    return FundamentalTensor(g, 0.5 * (ginv + ginv.T), min_eig)


def fundamental_tensor(spec: MetricSpec, p: SamplePoint) -> FundamentalTensor:
    """g_ij = 1/2 [F^2]_{y^i y^j}, its inverse and smallest eigenvalue.

    Raises ConvexityError if g is not positive definite.
    """
    _, _, _, d_yy = _f2_blocks(spec, p)
    return _tensor_from_hessian(d_yy)


def _spray(spec, p):
    F, d_x, d_xy, d_yy = _f2_blocks(spec, p)
    gt = _tensor_from_hessian(d_yy)
    y = np.asarray(p.y, dtype=float)
    G = 0.25 * gt.ginv @ (d_xy.T @ y - d_x)
    return G, F, gt, d_x, d_xy


def spray_coefficients(spec: MetricSpec, p: SamplePoint) -> np.ndarray:
    """G^i = 1/4 g^{il} ([F^2]_{x^k y^l} y^k - [F^2]_{x^l})."""
    return _spray(spec, p)[0]


def projective_factor(spec: MetricSpec, p: SamplePoint) -> Tuple[float, float]:
    """Projection P = <G, y>/<y, y> and how far G is from P y.

    The residual is ``|G - P y| / max(1, |G|)``.
    """
    G = spray_coefficients(spec, p)
    y = np.asarray(p.y, dtype=float)
    P = float(G @ y / (y @ y))
    residual = float(np.linalg.norm(G - P * y) / max(1.0, np.linalg.norm(G)))
    return P, residual


def dual_potential_check(spec: MetricSpec, p: SamplePoint) -> Tuple[float, float]:
    """H = -1/6 [F^2]_{x^m} y^m and the mismatch of G^i against -1/2 g^{ij} H_{y^j}."""
    G, _, gt, d_x, d_xy = _spray(spec, p)
    y = np.asarray(p.y, dtype=float)
    H = -float(d_x @ y) / 6.0
    H_y = -(d_xy.T @ y + d_x) / 6.0
    mismatch = G + 0.5 * gt.ginv @ H_y
    residual = float(np.max(np.abs(mismatch)) / max(1.0, np.linalg.norm(G)))
    return H, residual


@dataclass
class GeodesicTrace:
    """States (t, x, xdot) of an integrated geodesic."""

    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    step: float
    metric: MetricSpec
    truncated: bool = False
    messages: List[str] = field(default_factory=list)

    def __len__(self):
        return self.t.shape[0]

    @property
    def states(self):
        return list(zip(self.t, self.x, self.xdot))


def geodesic_integrate(spec, x0, y0, t_end, step=1e-3):
    """Integrate x'' = -2 G(x, x') with classical fixed-step RK4.

    If a stage leaves the metric's domain (or F stops being convex there) the
    integration stops and the returned trace has ``truncated=True``.  A start
    point outside the domain raises DomainError.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    if x.shape != (spec.dim,) or y.shape != (spec.dim,):
        raise ValueError(f"start point and velocity must have length {spec.dim}")
    if not spec.contains(x, y):
        raise DomainError("geodesic start point outside metric domain", value=x)

    def accel(xs, ys):
        if not spec.contains(xs, ys):
            raise DomainError("left metric domain", value=xs)
        return -2.0 * spray_coefficients(spec, SamplePoint(xs, ys))

    nsteps = int(round(t_end / step))
    ts, xs, vs = [0.0], [x.copy()], [y.copy()]
    truncated = False
    messages = []
    h = step
    for i in range(1, nsteps + 1):
        try:
            k1x, k1v = y, accel(x, y)
            k2x, k2v = y + 0.5 * h * k1v, accel(x + 0.5 * h * k1x, y + 0.5 * h * k1v)
            k3x, k3v = y + 0.5 * h * k2v, accel(x + 0.5 * h * k2x, y + 0.5 * h * k2v)
            k4x, k4v = y + h * k3v, accel(x + h * k3x, y + h * k3v)
            xn = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
            yn = y + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
            if not spec.contains(xn, yn):
                raise DomainError("left metric domain", value=xn)
        except (DomainError, ConvexityError) as exc:
            truncated = True
            messages.append(f"stopped at t={ts[-1]!r}: {exc}")
            break
        x, y = xn, yn
        ts.append(i * h)
        xs.append(x.copy())
        vs.append(y.copy())
    return GeodesicTrace(np.array(ts), np.array(xs), np.array(vs), step, spec,
                         truncated, messages)


def straightness_residual(trace) -> float:
    """Largest distance from the trace to its chord, divided by the chord length.

    ``trace`` is a GeodesicTrace or an array of points with shape (N, n).
    """
    pts = trace.x if isinstance(trace, GeodesicTrace) else np.asarray(trace, dtype=float)
    if pts.shape[0] < 3:
        raise ValueError("straightness needs at least 3 states")
    a, b = pts[0], pts[-1]
    chord = b - a
    length = float(np.linalg.norm(chord))
    if length == 0.0:
        raise ValueError("trace endpoints coincide; chord is undefined")
    e = chord / length
    rel = pts - a
    perp = rel - np.outer(rel @ e, e)
    return float(np.max(np.linalg.norm(perp, axis=1)) / length)


def energy_drift(trace: GeodesicTrace) -> float:
    """max |F(x(t), x'(t)) - F(x(0), x'(0))| / F(x(0), x'(0)) along the trace."""
    Fs = np.array([finsler_eval(trace.metric, SamplePoint(x, v))
                   for x, v in zip(trace.x, trace.xdot)])
    return float(np.max(np.abs(Fs - Fs[0])) / abs(Fs[0]))


def write_trace_csv(trace: GeodesicTrace, path_or_file):
    """Write ``t,x1..xn,xd1..xdn`` rows with 17 significant digits."""
    n = trace.x.shape[1]
    header = ["t"] + [f"x{i + 1}" for i in range(n)] + [f"xd{i + 1}" for i in range(n)]
    lines = [",".join(header)]
    for t, x, xd in zip(trace.t, trace.x, trace.xdot):
        row = [t, *x, *xd]
        lines.append(",".join(format(float(v), ".17g") for v in row))
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
