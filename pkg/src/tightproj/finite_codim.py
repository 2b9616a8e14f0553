"""Projections with finite-dimensional kernel.

A projection ``P`` with ``dim ker P = N`` and ``PEP = alpha P`` exists exactly
when ``E - alpha`` has rank at most ``2N``. When it does, the projection onto
``ker(E - alpha)`` is a witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ObstructionError
from .linalg import EigenDecomp, SymMatrix, compress, jacobi_eigh, max_norm
from .pairing import eigenspace_projection
from .spectrum import SpectrumModel

DEFAULT_TOL = 1e-10


def _prepare(e):
    """``(matrix, eigendecomposition)`` for any matrix-like input."""
    if isinstance(e, EigenDecomp):
        return SymMatrix(e.reconstruct()), e
    if not isinstance(e, SymMatrix):
        e = SymMatrix.checked(e)
    return e, jacobi_eigh(e)


def _count_off(eig: EigenDecomp, alpha: float, cutoff: float) -> int:
    return int(np.count_nonzero(np.abs(eig.eigenvalues - alpha) > cutoff))


def rank_of_translate(e, alpha: float, tol: float = DEFAULT_TOL):
    """``dim ran(E - alpha)``: an int, or ``math.inf`` for a model with infinitely many terms off ``alpha``.

    For matrices, eigenvalues with ``|lambda - alpha| > tol * (1 + ||E||_max)``
    count toward the rank.
    """
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    if isinstance(e, SpectrumModel):
        return e.count_not_equal(float(alpha))
    mat, eig = _prepare(e)
    return _count_off(eig, alpha, tol * (1.0 + max_norm(mat.entries)))


@dataclass(frozen=True)
class CofiniteProjection:
    """Projection onto ``span{e_n : n not in excluded}`` for a modeled operator (0-based)."""

    excluded: tuple
    codim: int


def _obstruction(n, alpha, r):
    shown = "infinite" if math.isinf(r) else str(r)
    return ObstructionError(
        f"no projection with {n}-dimensional kernel compresses E to {alpha!r} P: "
        f"dim ran(E - alpha) = {shown} exceeds 2N = {2 * n}"
    )


def finite_codim_projection(e, alpha: float, n: int, tol: float = DEFAULT_TOL):
    """Kernel projection of ``E - alpha``, whose codimension is at most ``2n``.

    Returns a ``Projection`` for matrices and a ``CofiniteProjection`` for
    spectrum models.

    Raises:
        ObstructionError: ``dim ran(E - alpha) > 2n`` (or infinite).
    """
    if n < 1:
        raise InvalidInputError("n must be a positive integer")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    alpha = float(alpha)

    if isinstance(e, SpectrumModel):
        r = e.count_not_equal(alpha)
        if r > 2 * n:
            raise _obstruction(n, alpha, r)
        head = e.params["head"] if e.family == "ExplicitTail" else ()
        excluded = tuple(i for i, h in enumerate(head) if abs(h - alpha) > 1e-12 * (1.0 + abs(alpha)))
        return CofiniteProjection(excluded, len(excluded))

    mat, eig = _prepare(e)
    cutoff = tol * (1.0 + max_norm(mat.entries))
    r = _count_off(eig, alpha, cutoff)
    if r > 2 * n:
        raise _obstruction(n, alpha, r)
    p = eigenspace_projection(eig, alpha, cutoff)
    resid = max_norm(compress(p, mat).entries - alpha * p.matrix)
    if resid > cutoff:
        raise ObstructionError(f"kernel projection residual {resid:.3e} exceeds {cutoff:.3e}")
    return p
