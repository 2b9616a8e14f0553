"""Cyclic-by-row Jacobi sweeps on a dense symmetric matrix.

Two implementations with identical arithmetic: ``_jacobi_numba`` loops
element-wise under ``@njit``; ``_jacobi_numpy`` does each rotation with
vectorized row/column updates. Both work in place on ``a`` and ``v`` and
return ``(sweeps, off_norm, converged)``.
"""
import math

import numpy as np

from ._accel import HAS_NUMBA, USE_NUMBA, njit


def _rotation(app, aqq, apq):
    # Symmetric Schur 2x2: t = tan(theta), the smaller root for stability.
    theta = (aqq - app) / (2.0 * apq)
    t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    return t, c, t * c


_rotation_jit = njit(_rotation)


def _off_norm(a):
    n = a.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            acc += a[i, j] * a[i, j]
    return math.sqrt(2.0 * acc)


_off_norm_jit = njit(_off_norm)


def _negligible(x, g):
    return abs(x) + g == abs(x)


@njit
def _jacobi_numba(a, v, threshold, max_sweeps):
    n = a.shape[0]
    off = _off_norm_jit(a)
    for sweep in range(max_sweeps):
        if off <= threshold:
            return sweep, off, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                t, c, s = _rotation_jit(app, aqq, apq)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
        off = _off_norm_jit(a)
    return max_sweeps, off, off <= threshold


def _jacobi_numpy(a, v, threshold, max_sweeps):
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    off = math.sqrt(2.0 * float(np.sum(a[iu] ** 2)))
    for sweep in range(max_sweeps):
        if off <= threshold:
            return sweep, off, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and _negligible(app, g) and _negligible(aqq, g):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                t, c, s = _rotation(app, aqq, apq)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        off = math.sqrt(2.0 * float(np.sum(a[iu] ** 2)))
    return max_sweeps, off, off <= threshold


BACKENDS = {"numpy": _jacobi_numpy}
if HAS_NUMBA:
    BACKENDS["numba"] = _jacobi_numba


def jacobi_sweeps(a, v, threshold, max_sweeps, backend=None):
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    try:
        kernel = BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown backend {backend!r}; available: {sorted(BACKENDS)}") from None
    return kernel(a, v, float(threshold), int(max_sweeps))
