"""Adaptive Simpson quadrature for smooth scalar integrands."""

from .errors import QuadratureError


def adaptive_simpson(f, a, b, abs_tol=1e-10, max_evals=200000, max_depth=60):
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``abs_tol``.

    Uses the standard Lyness criterion |S2 - S1| <= 15 tol on each panel with
    Richardson extrapolation of the accepted value.  Raises QuadratureError if
    the evaluation budget or recursion depth is exhausted.
    """
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    evals = 0

    def fx(t):
        nonlocal evals
        evals += 1
        if evals > max_evals:
            raise QuadratureError(f"no convergence within {max_evals} evaluations")
        return float(f(t))

    fa, fb = fx(a), fx(b)
    m = 0.5 * (a + b)
    fm = fx(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    # explicit stack: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, abs_tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, s, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = fx(lm), fx(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - s
        if abs(delta) <= 15.0 * tol:
            total += left + right + delta / 15.0
        elif depth >= max_depth:
            raise QuadratureError(f"recursion depth {max_depth} reached near t={mid!r}")
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * tol, depth + 1))
    return total
