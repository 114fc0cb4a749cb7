"""Spherically symmetric Finsler metrics F(x, y) = phi(|x|, |y|, <x, y>).

The central object is the two-parameter family

    phi(r, u, v) = (sqrt((k - c^2 r^2) u^2 + c^2 v^2) + c v) / (k - c^2 r^2)

which contains the Funk metric of the unit ball at ``k = c = 1``.  All metric
functions accept floats or :class:`~finslerflat.jets.Jet2` values, so the same
code path yields F and its exact derivatives.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .jets import Jet2, sqrt, variables

__all__ = [
    "MetricSpec",
    "SamplePoint",
    "phi_family",
    "funk_formula",
    "phi",
    "finsler_eval",
    "finsler_jet",
    "f_solution",
    "psi_of",
    "sample_domain",
    "ZOO",
]

KINDS = ("family", "funk", "euclidean", "perturbed", "custom")


def _val(a):
    return a.value if isinstance(a, Jet2) else a


def phi_family(k, c, r, u, v):
    """The classified metric family, evaluated at ``(r, u, v)``."""
    return _phi_family_r2(k, c, r * r, u, v)


def _phi_family_r2(k, c, r2, u, v):
    # works on r^2 so that x = 0 needs no sqrt(|x|^2)
    den = k - c * c * r2
    if not _val(den) > 0.0:
        raise DomainError("outside metric domain: k - c^2 r^2 <= 0", value=_val(den))
    return (sqrt(den * u * u + c * c * v * v) + c * v) / den


def funk_formula(x, y):
    """Funk metric of the unit ball, written directly in x and y."""
    xx = sum(a * a for a in x)
    yy = sum(b * b for b in y)
    xy = sum(a * b for a, b in zip(x, y))
    den = 1.0 - xx
    if not _val(den) > 0.0:
        raise DomainError("outside the unit ball", value=_val(den))
    return (sqrt(yy - (xx * yy - xy * xy)) + xy) / den


def f_solution(t, c, k):
    """1 / sqrt(c^2 t + k), the generating function of the family."""
    arg = c * c * t + k
    if not _val(arg) > 0.0:
        raise DomainError("c^2 t + k <= 0", value=_val(arg))
    return 1.0 / sqrt(arg)


@dataclass(frozen=True)
class MetricSpec:
    """Selects a metric and its parameters.

    ``kind`` is one of ``family``, ``funk``, ``euclidean``, ``perturbed`` or
    ``custom``.  ``perturbed`` multiplies the family by ``1 + eps r s`` with
    ``s = v/u``; it is smooth and 1-homogeneous but neither projectively nor
    dually flat, and serves as the negative control.  A ``custom`` metric
    supplies ``custom_phi(r, u, v)`` together with a domain predicate on
    ``(r, u, v)`` and an optional sampling radius.
    """

    kind: str = "family"
    k: float = 1.0
    c: float = 1.0
    dim: int = 3
    eps: float = 0.1
    custom_phi: Optional[Callable] = field(default=None, compare=False)
    custom_domain: Optional[Callable] = field(default=None, compare=False)
    custom_radius: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.dim}")
        if self.kind == "funk":
            object.__setattr__(self, "k", 1.0)
            object.__setattr__(self, "c", 1.0)
        if self.kind in ("family", "perturbed") and not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.kind == "custom" and (self.custom_phi is None or self.custom_domain is None):
            raise ValueError("custom metrics need both custom_phi and custom_domain")

    @classmethod
    def family(cls, k, c, dim=3):
        return cls("family", k=float(k), c=float(c), dim=dim)

    @classmethod
    def funk(cls, dim=3):
        return cls("funk", dim=dim)

    @classmethod
    def euclidean(cls, dim=3):
        return cls("euclidean", k=1.0, c=0.0, dim=dim)

    @classmethod
    def perturbed(cls, k=1.0, c=1.0, dim=3, eps=0.1):
        return cls("perturbed", k=float(k), c=float(c), dim=dim, eps=eps)

    @classmethod
    def custom(cls, phi, domain, dim=3, radius=None):
        return cls("custom", dim=dim, custom_phi=phi, custom_domain=domain,
                   custom_radius=radius)

    @property
    def radius(self):
        """Radius of the ball on which the metric is defined, or None if unbounded."""
        if self.kind == "euclidean":
            return None
        if self.kind == "custom":
            return self.custom_radius
        if self.c == 0:
            return None
        return float(np.sqrt(self.k) / abs(self.c))

    @property
    def projectively_flat(self):
        """Whether the metric is expected to be projectively and dually flat."""
        return self.kind in ("family", "funk", "euclidean")

    def summary(self):
        out = {"kind": self.kind, "dim": int(self.dim)}
        if self.kind in ("family", "funk", "perturbed"):
            out["k"] = float(self.k)
            out["c"] = float(self.c)
        if self.kind == "perturbed":
            out["eps"] = float(self.eps)
        return out

    def contains(self, x, y=None):
        """Domain test for a base point (and optionally a tangent vector)."""
        x = np.asarray(x, dtype=float)
        r2 = float(x @ x)
        if y is not None:
            y = np.asarray(y, dtype=float)
            if not float(y @ y) > 0.0:
                return False
        if self.kind == "euclidean":
            return True
        if self.kind == "custom":
            yy = np.ones_like(x) if y is None else y
            return bool(self.custom_domain(np.sqrt(r2), float(np.linalg.norm(yy)),
                                           float(x @ yy)))
        return self.k - self.c * self.c * r2 > 0.0


@dataclass(frozen=True)
class SamplePoint:
    x: np.ndarray
    y: np.ndarray

    @property
    def r(self):
        return float(np.linalg.norm(self.x))

    @property
    def u(self):
        return float(np.linalg.norm(self.y))

    @property
    def v(self):
        return float(self.x @ self.y)

    @property
    def s(self):
        return self.v / self.u


def _radius(r2):
    # |x| is not differentiable at the origin; only the float path allows it
    if not isinstance(r2, Jet2) and r2 == 0.0:
        return 0.0
    return sqrt(r2)


def _phi_r2(spec, r2, u, v):
    kind = spec.kind
    if kind == "euclidean":
        return u
    if kind == "family" or kind == "funk":
        return _phi_family_r2(spec.k, spec.c, r2, u, v)
    if kind == "perturbed":
        base = _phi_family_r2(spec.k, spec.c, r2, u, v)
        return base * (1.0 + spec.eps * _radius(r2) * v / u)
    return spec.custom_phi(_radius(r2), u, v)


def phi(spec, r, u, v):
    """phi(r, u, v) of the given metric."""
    if spec.kind == "custom":
        return spec.custom_phi(r, u, v)
    return _phi_r2(spec, r * r, u, v)


def _invariants(x, y):
    r2 = sum(a * a for a in x)
    uu = sum(b * b for b in y)
    v = sum(a * b for a, b in zip(x, y))
    return r2, sqrt(uu), v


def finsler_eval(spec, p):
    """F(x, y) at a sample point (floats)."""
    x, y = np.asarray(p.x, dtype=float), np.asarray(p.y, dtype=float)
    if spec.kind == "funk":
        return float(funk_formula(x, y))
    r2, u, v = _invariants(x, y)
    return float(_phi_r2(spec, r2, u, v))


def finsler_jet(spec, p):
    """F as a jet in the 2n variables (x^1..x^n, y^1..y^n)."""
    x, y = np.asarray(p.x, dtype=float), np.asarray(p.y, dtype=float)
    n = x.shape[0]
    if y.shape[0] != n:
        raise ValueError("x and y must have the same length")
    seeds = variables(np.concatenate([x, y]))
    xs, ys = seeds[:n], seeds[n:]
    if spec.kind == "funk":
        return funk_formula(xs, ys)
    r2, u, v = _invariants(xs, ys)
    return _phi_r2(spec, r2, u, v)


def psi_of(spec, r, s):
    """psi(r, s) = phi(r, 1, s)."""
    return phi(spec, r, 1.0, s)


def sample_domain(spec, seed, count, margin=0.1, radius_cap=1.0):
    """Seeded sample points inside the metric's domain.

    Base points are uniform in the ball of radius ``(1 - margin) R`` where R
    is the domain radius (``radius_cap`` when the domain is unbounded).
    Tangent vectors have uniform direction and length uniform in [0.5, 2].
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 0 < margin < 1:
        raise ValueError("margin must lie in (0, 1)")
    n = spec.dim
    R = spec.radius
    if R is None:
        R = radius_cap
    rmax = (1.0 - margin) * R
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        x = d * rmax * rng.random() ** (1.0 / n)
        e = rng.standard_normal(n)
        e /= np.linalg.norm(e)
        y = e * rng.uniform(0.5, 2.0)
        if spec.contains(x, y):
            points.append(SamplePoint(x, y))
    return points


# metrics exercised by the certification suites; the perturbed entry is the
# negative control
ZOO = {
    "euclidean": MetricSpec.euclidean(),
    "funk": MetricSpec.funk(),
    "family(2,0.5)": MetricSpec.family(2.0, 0.5),
    "family(4,2)": MetricSpec.family(4.0, 2.0),
    "perturbed": MetricSpec.perturbed(),
}
