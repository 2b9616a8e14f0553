"""Real polynomials in ascending-coefficient form: evaluation, roots, integrals.

Roots on an interval are isolated by recursion on the derivative: between
consecutive critical points a polynomial is monotone, so each such piece holds
at most one root, which bisection pins down to the last representable float.
"""
from __future__ import annotations

import numpy as np


def trim(coeffs) -> tuple[float, ...]:
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


def degree(coeffs) -> int:
    c = trim(coeffs)
    return 0 if c == (0.0,) else len(c) - 1


def horner(coeffs, x):
    acc = 0.0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def derivative(coeffs) -> tuple[float, ...]:
    c = trim(coeffs)
    if len(c) == 1:
        return (0.0,)
    return tuple(k * c[k] for k in range(1, len(c)))


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def _bisect(coeffs, u: float, v: float, fu: float) -> float:
    su = _sign(fu)
    while True:
        mid = 0.5 * (u + v)
        if mid <= u or mid >= v:
            break
        fm = horner(coeffs, mid)
        if fm == 0.0:
            return mid
        if _sign(fm) == su:
            u = mid
        else:
            v = mid
    return u if abs(horner(coeffs, u)) <= abs(horner(coeffs, v)) else v


def real_roots(coeffs, lo: float, hi: float) -> list[float]:
    """Sorted distinct real roots in ``[lo, hi]``; empty for the zero polynomial."""
    c = trim(coeffs)
    deg = len(c) - 1
    if deg == 0 or lo > hi:
        return []
    if deg == 1:
        r = -c[0] / c[1]
        return [r] if lo <= r <= hi else []
    crit = real_roots(derivative(c), lo, hi)
    knots = [lo] + [x for x in crit if lo < x < hi] + [hi]
    roots = []
    for u, v in zip(knots[:-1], knots[1:]):
        fu = horner(c, u)
        fv = horner(c, v)
        if fu == 0.0:
            roots.append(u)
        elif fv != 0.0 and _sign(fu) != _sign(fv):
            roots.append(_bisect(c, u, v, fu))
    if horner(c, hi) == 0.0:
        roots.append(hi)
    out = []
    for r in sorted(roots):
        if not out or r != out[-1]:
            out.append(r)
    return out


def critical_points(coeffs, lo: float, hi: float) -> list[float]:
    return [x for x in real_roots(derivative(coeffs), lo, hi) if lo < x < hi]


def extrema(coeffs, lo: float, hi: float) -> tuple[float, float]:
    """Min and max over the closed interval ``[lo, hi]``."""
    pts = [lo, hi] + critical_points(coeffs, lo, hi)
    vals = [horner(coeffs, x) for x in pts]
    return min(vals), max(vals)


def taylor_shift(coeffs, m: float) -> list[float]:
    """Coefficients of ``t -> p(m + t)``."""
    q = list(trim(coeffs))
    n = len(q)
    for k in range(n - 1):
        for j in range(n - 2, k - 1, -1):
            q[j] += m * q[j + 1]
    return q


def integrate(coeffs, u: float, v: float) -> float:
    """``int_u^v p(x) dx``, expanded about the midpoint to avoid cancellation."""
    if v == u:
        return 0.0
    m = 0.5 * (u + v)
    h = 0.5 * (v - u)
    q = taylor_shift(coeffs, m)
    total = 0.0
    for k in range(0, len(q), 2):
        total += q[k] * (2.0 * h ** (k + 1) / (k + 1))
    return total


def evaluate(coeffs, x):
    return horner(trim(coeffs), np.asarray(x, dtype=float))
