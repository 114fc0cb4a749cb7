"""Second-order forward-mode automatic differentiation.

A :class:`Jet2` carries the value, gradient and (dense) Hessian of a scalar
quantity with respect to ``m`` independent variables.  Arithmetic on jets
applies the product, quotient and chain rules, so any expression built from
``+ - * /``, integer powers and :func:`sqrt` yields exact first and second
partial derivatives up to floating point roundoff.

Functions in this package are written once and evaluated either on plain
floats or on jets, so the module-level :func:`sqrt` accepts both.

>>> x, y = variables([2.0, 3.0])
>>> z = x * y
>>> z.value, z.grad.tolist()
(6.0, [3.0, 2.0])
"""

import math

import numpy as np

from .errors import DomainError, NonSmoothError

__all__ = [
    "Jet2",
    "seed_variable",
    "variables",
    "constant",
    "sqrt",
    "jet_arith",
    "fd_oracle",
]


class Jet2:
    """Value, gradient and Hessian of a scalar function of ``m`` variables.

    Jets are treated as immutable; every operation returns a new jet.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @property
    def m(self):
        return self.grad.shape[0]

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad!r}, hess={self.hess!r})"

    # -- helpers -----------------------------------------------------------

    def _check(self, other):
        if other.grad.shape != self.grad.shape:
            raise ValueError(
                f"jets over different variable counts: {self.m} and {other.m}"
            )

    def _unary(self, f0, f1, f2):
        # chain rule: d(f(a)) = f'(a) da, d2(f(a)) = f'(a) d2a + f''(a) da da^T
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.value + other.value, self.grad + other.grad,
                        self.hess + other.hess)
        return Jet2(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            return Jet2(self.value - other.value, self.grad - other.grad,
                        self.hess - other.hess)
        return Jet2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet2(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            self._check(other)
            a, b = self, other
            cross = np.outer(a.grad, b.grad)
            cross += cross.T.copy()  # bitwise symmetric before mixing
            return Jet2(
                a.value * b.value,
                a.value * b.grad + b.value * a.grad,
                a.value * b.hess + b.value * a.hess + cross,
            )
        return Jet2(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.value
        if a == 0.0:
            raise DomainError("division by zero", value=a)
        inv = 1.0 / a
        return self._unary(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        if other == 0:
            raise DomainError("division by zero", value=float(other))
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("Jet2 supports integer powers only; use sqrt()")
        n = int(n)
        if n == 0:
            return constant(1.0, self.m)
        if n == 1:
            return self
        a = self.value
        if n < 0 and a == 0.0:
            raise DomainError("negative power of zero", value=a)
        if n == 2:
            return self * self
        return self._unary(a**n, n * a ** (n - 1), n * (n - 1) * a ** (n - 2))

    def sqrt(self):
        a = self.value
        if not a > 0.0:
            raise DomainError(f"sqrt of non-positive value {a!r}", value=a)
        s = math.sqrt(a)
        return self._unary(s, 0.5 / s, -0.25 / (a * s))


def seed_variable(index, value, m):
    """Independent variable number ``index`` out of ``m``, at ``value``."""
    if not 0 <= index < m:
        raise ValueError(f"variable index {index} out of range for m={m}")
    grad = np.zeros(m)
    grad[index] = 1.0
    return Jet2(value, grad, np.zeros((m, m)))


def variables(values):
    """Seed one jet per entry of ``values``."""
    values = [float(v) for v in values]
    m = len(values)
    return [seed_variable(i, v, m) for i, v in enumerate(values)]


def constant(value, m):
    return Jet2(value, np.zeros(m), np.zeros((m, m)))


def sqrt(a):
    """Square root of a float or a jet; non-positive arguments raise DomainError.

    Zero is rejected for floats as well as jets so that both evaluation paths
    share one domain.
    """
    if isinstance(a, Jet2):
        return a.sqrt()
    if not a > 0.0:
        raise DomainError(f"sqrt of non-positive value {a!r}", value=float(a))
    return math.sqrt(a)


_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow_int": lambda a, b: a**b,
    "scale": lambda a, b: a * float(b),
}


def jet_arith(a, b, op):
    """Apply a named operation; ``b`` is ignored for ``sqrt``.

    Equivalent to the operator overloads, kept for callers that select the
    operation at runtime.
    """
    if op == "sqrt":
        return sqrt(a)
    try:
        fn = _BINARY[op]
    except KeyError:
        raise ValueError(f"unknown jet operation {op!r}") from None
    return fn(a, b)


def _eval_stencil(f, point, offset):
    try:
        val = float(f(point + offset))
    except DomainError as exc:
        raise DomainError(
            f"stencil point at offset {offset.tolist()} leaves the domain: {exc}",
            value=offset,
        ) from exc
    if not math.isfinite(val):
        raise DomainError(
            f"non-finite value at stencil offset {offset.tolist()}", value=offset
        )
    return val


def _central(f, point, h):
    m = point.shape[0]
    eye = np.eye(m) * h
    f0 = _eval_stencil(f, point, np.zeros(m))
    fp = [_eval_stencil(f, point, eye[i]) for i in range(m)]
    fm = [_eval_stencil(f, point, -eye[i]) for i in range(m)]
    grad = np.array([(fp[i] - fm[i]) / (2 * h) for i in range(m)])
    hess = np.empty((m, m))
    for i in range(m):
        hess[i, i] = (fp[i] - 2 * f0 + fm[i]) / (h * h)
        for j in range(i + 1, m):
            d = (
                _eval_stencil(f, point, eye[i] + eye[j])
                - _eval_stencil(f, point, eye[i] - eye[j])
                - _eval_stencil(f, point, -eye[i] + eye[j])
                + _eval_stencil(f, point, -eye[i] - eye[j])
            ) / (4 * h * h)
            hess[i, j] = hess[j, i] = d
    return grad, hess


def fd_oracle(f, point, h=1e-5, kink_tol=1e-2):
    """Central-difference gradient and Hessian of ``f`` at ``point``.

    ``f`` maps a float vector to a float.  Both estimates are O(h^2).  The
    Hessian is recomputed with step ``2h``; if the two disagree by more than
    ``kink_tol`` relative to their size, ``f`` is not twice differentiable at
    ``point`` and :class:`NonSmoothError` is raised.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    point = np.atleast_1d(np.asarray(point, dtype=float))
    grad, hess = _central(f, point, h)
    _, hess2 = _central(f, point, 2 * h)
    scale = max(1.0, np.max(np.abs(hess)), np.max(np.abs(hess2)))
    if np.max(np.abs(hess - hess2)) > kink_tol * scale:
        raise NonSmoothError(
            f"second differences do not converge at {point.tolist()}", value=point
        )
    return grad, hess
