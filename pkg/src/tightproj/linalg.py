"""Dense real symmetric linear algebra for frames.

Frame operators, a cyclic Jacobi eigensolver, projections, compressions and
the tightness certificate that checks ``P S P = alpha P`` two ways.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ConvergenceError, InvalidInputError

DEFAULT_PROBES = 8
DEFAULT_SEED = 0


def _frozen(arr):
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


def _mirror_upper(a):
    """Copy the upper triangle onto the lower one (bit-exact symmetry)."""
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


def max_norm(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class FrameSpec:
    """A finite list of ``M`` vectors in ``R^dim``, stored row-wise."""

    dim: int
    vectors: np.ndarray

    def __post_init__(self):
        try:
            vecs = np.asarray(self.vectors, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"frame vectors are not numeric: {exc}") from None
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise InvalidInputError(f"dim must be a positive integer, got {self.dim!r}")
        if vecs.ndim == 1 and vecs.size == self.dim:
            vecs = vecs.reshape(1, -1)
        if vecs.ndim != 2 or vecs.shape[0] < 1 or vecs.shape[1] != self.dim:
            raise InvalidInputError(
                f"expected M >= 1 vectors of length {self.dim}, got array of shape {vecs.shape}"
            )
        if not np.all(np.isfinite(vecs)):
            raise InvalidInputError("frame vectors contain non-finite entries")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "vectors", _frozen(vecs))

    @classmethod
    def from_vectors(cls, vectors):
        vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
        return cls(vecs.shape[1], vecs)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def transformed(self, u) -> FrameSpec:
        """The frame ``{U f_i}``."""
        return FrameSpec(self.dim, self.vectors @ np.asarray(u, dtype=float).T)

    def scaled(self, c: float) -> FrameSpec:
        return FrameSpec(self.dim, c * self.vectors)


@dataclass(frozen=True)
class SymMatrix:
    """A real symmetric matrix; only the upper triangle of the input is used."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("matrix contains non-finite entries")
        object.__setattr__(self, "entries", _frozen(_mirror_upper(a)))

    @classmethod
    def checked(cls, a, rtol: float = 1e-12) -> SymMatrix:
        """Like the constructor, but reject inputs that are visibly non-symmetric."""
        a = np.asarray(a, dtype=float)
        if a.ndim == 2 and a.shape[0] == a.shape[1]:
            skew = max_norm(a - a.T)
            if skew > rtol * (1.0 + max_norm(a)):
                raise InvalidInputError(f"matrix is not symmetric (max |A - A^T| = {skew:.3e})")
        return cls(a)

    @classmethod
    def diag(cls, values) -> SymMatrix:
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class EigenDecomp:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0
    off_norm: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float)
        q = np.asarray(self.eigenvectors, dtype=float)
        if q.shape != (w.size, w.size):
            raise InvalidInputError("eigenvector matrix shape does not match eigenvalue count")
        if np.any(np.diff(w) < 0):
            raise InvalidInputError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", _frozen(w))
        object.__setattr__(self, "eigenvectors", _frozen(q))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T

    def orthonormality_residual(self) -> float:
        q = self.eigenvectors
        return max_norm(q.T @ q - np.eye(self.dim))


@dataclass(frozen=True)
class Projection:
    """Orthogonal projection given by an orthonormal basis of its range."""

    dim: int
    basis: np.ndarray
    rank: int = field(default=-1)

    ORTHONORMAL_TOL = 1e-12

    def __post_init__(self):
        q = np.asarray(self.basis, dtype=float)
        if q.ndim == 1:
            q = q.reshape(-1, 1)
        if q.size == 0:
            q = np.zeros((int(self.dim), 0))
        if q.ndim != 2 or q.shape[0] != self.dim:
            raise InvalidInputError(f"basis must be {self.dim} x r, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise InvalidInputError("projection basis contains non-finite entries")
        r = q.shape[1]
        if self.rank not in (-1, r):
            raise InvalidInputError(f"declared rank {self.rank} does not match {r} basis columns")
        dev = max_norm(q.T @ q - np.eye(r)) if r else 0.0
        if dev > self.ORTHONORMAL_TOL:
            raise InvalidInputError(f"basis columns are not orthonormal (deviation {dev:.3e})")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "basis", _frozen(q))
        object.__setattr__(self, "rank", r)

    @classmethod
    def identity(cls, dim: int) -> Projection:
        return cls(dim, np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> Projection:
        return cls(dim, np.zeros((dim, 0)))

    @property
    def matrix(self) -> np.ndarray:
        q = self.basis
        return _mirror_upper(q @ q.T)

    @property
    def codim(self) -> int:
        return self.dim - self.rank


@dataclass(frozen=True)
class TightnessCertificate:
    alpha: float
    rank: int
    residual_compression: float
    residual_reconstruction: float
    tolerance: float
    passed: bool
    seed: int = DEFAULT_SEED
    probes: int = DEFAULT_PROBES

    @property
    def routes_agree(self) -> bool:
        """Whether both residual routes give the same verdict at ``tolerance``."""
        return (self.residual_compression <= self.tolerance) == (
            self.residual_reconstruction <= self.tolerance
        )


def _as_frame(frame) -> FrameSpec:
    return frame if isinstance(frame, FrameSpec) else FrameSpec.from_vectors(frame)


def _as_sym(e) -> SymMatrix:
    return e if isinstance(e, SymMatrix) else SymMatrix.checked(e)


def frame_operator(frame) -> SymMatrix:
    """``S = sum_i f_i f_i^T``."""
    f = _as_frame(frame).vectors
    return SymMatrix(f.T @ f)


def jacobi_eigh(s, tol: float = 1e-14, max_sweeps: int = 100, backend=None) -> EigenDecomp:
    """Cyclic-by-row Jacobi eigendecomposition.

    Sweeps until the off-diagonal Frobenius norm is at most ``tol * ||S||_F``.
    Eigenvalues come back ascending; ties keep the order Jacobi left them in.

    Args:
        s: symmetric matrix (``SymMatrix`` or array).
        tol: relative off-diagonal stopping threshold, must be positive.
        max_sweeps: sweep cap before ``ConvergenceError``.
        backend: ``"numba"`` or ``"numpy"``; defaults to the ``TIGHTPROJ_NUMBA`` choice.

    Raises:
        ConvergenceError: the cap was hit; carries the final off-diagonal norm.
    """
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    a = np.array(_as_sym(s).entries, dtype=float, order="C")
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * float(np.linalg.norm(a))
    sweeps, off, converged = _kernels.jacobi_sweeps(a, v, threshold, max_sweeps, backend)
    if not converged:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})",
            off_norm=off,
            sweeps=sweeps,
        )
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomp(w[order], v[:, order], sweeps=int(sweeps), off_norm=float(off))


def frame_bounds(frame) -> tuple[float, float]:
    """Optimal frame bounds ``(A, B)``: extreme eigenvalues of the frame operator.

    ``A == 0`` means the vectors do not span; negative rounding noise is
    reported as 0.
    """
    w = jacobi_eigh(frame_operator(frame)).eigenvalues
    return max(float(w[0]), 0.0), max(float(w[-1]), 0.0)


def is_tight(frame, rtol: float = 1e-10) -> bool:
    a, b = frame_bounds(frame)
    return a > 0 and b - a <= rtol * (1.0 + b)


def _check_dims(p: Projection, dim: int):
    if p.dim != dim:
        raise InvalidInputError(f"dimension mismatch: projection acts on R^{p.dim}, operand on R^{dim}")


def compress(p: Projection, e) -> SymMatrix:
    """The full matrix ``P E P``."""
    e = _as_sym(e)
    _check_dims(p, e.dim)
    q = p.basis
    return SymMatrix(q @ (q.T @ e.entries @ q) @ q.T)


def project_frame(p: Projection, frame) -> FrameSpec:
    """``{P f_i}`` in ambient coordinates."""
    frame = _as_frame(frame)
    _check_dims(p, frame.dim)
    return FrameSpec(frame.dim, frame.vectors @ p.matrix)


def probe_vectors(p: Projection, probes: int = DEFAULT_PROBES, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Unit probes in ``ran P``: the basis columns, then ``probes`` seeded combinations."""
    q = p.basis
    if p.rank == 0:
        return np.zeros((p.dim, 0))
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal((p.rank, probes))
    coeffs /= np.linalg.norm(coeffs, axis=0)
    return np.hstack([q, q @ coeffs])


def verify_tight(
    frame,
    p: Projection,
    alpha: float,
    tol: float | None = None,
    probes: int = DEFAULT_PROBES,
    seed: int = DEFAULT_SEED,
) -> TightnessCertificate:
    """Certify that ``{P f_i}`` is a tight frame for ``ran P`` with bound ``alpha``.

    Two independent residuals: ``||PSP - alpha P||_max`` and the worst
    reconstruction error ``||(1/alpha) sum <f, Pf_i> Pf_i - f||`` over probe
    vectors ``f`` in ``ran P``. ``tol`` defaults to ``1e-10 * (1 + ||S||_max)``.
    """
    frame = _as_frame(frame)
    _check_dims(p, frame.dim)
    if not alpha > 0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    if probes < 0:
        raise InvalidInputError("probes must be nonnegative")
    s = frame_operator(frame)
    if tol is None:
        tol = 1e-10 * (1.0 + max_norm(s.entries))
    if not tol > 0:
        raise InvalidInputError("tol must be positive")

    pm = p.matrix
    res_comp = max_norm(compress(p, s).entries - alpha * pm)

    g = frame.vectors @ pm
    f = probe_vectors(p, probes, seed)
    if f.shape[1]:
        recon = g.T @ (g @ f) / alpha
        res_recon = float(np.max(np.linalg.norm(recon - f, axis=0)))
    else:
        res_recon = 0.0

    return TightnessCertificate(
        alpha=float(alpha),
        rank=p.rank,
        residual_compression=res_comp,
        residual_reconstruction=res_recon,
        tolerance=float(tol),
        passed=bool(res_comp <= tol and res_recon <= tol),
        seed=int(seed),
        probes=int(probes),
    )
