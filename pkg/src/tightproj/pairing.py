"""Eigenvalue pairing across a target ``alpha``.

Given eigenpairs ``(lambda_i, e_i)`` of a positive operator, pick disjoint
index pairs ``(n, m)`` with ``lambda_n <= alpha <= lambda_m`` and weights so
that ``f = a_n e_n + a_m e_m`` has Rayleigh quotient exactly ``alpha``. The
span of such ``f`` is compressed to ``alpha`` times the identity. Indices
are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import CertificateError, InfeasibleAlphaError, InvalidInputError
from .linalg import (
    DEFAULT_PROBES,
    DEFAULT_SEED,
    EigenDecomp,
    FrameSpec,
    Projection,
    TightnessCertificate,
    frame_operator,
    jacobi_eigh,
    max_norm,
    verify_tight,
)

# |lambda - alpha| below this (times 1 + |alpha|) counts as equal
EQUAL_RTOL = 1e-12


@dataclass(frozen=True)
class Pair:
    n: int
    m: int
    a_n: float
    a_m: float


@dataclass(frozen=True)
class Singleton:
    i: int


Entry = Union[Pair, Singleton]


@dataclass(frozen=True)
class PairingPlan:
    alpha: float
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for idx in self.consumed_indices:
            if idx in seen:
                raise InvalidInputError(f"index {idx} used twice in pairing plan")
            seen.add(idx)
        for e in self.entries:
            if isinstance(e, Pair):
                if not (0.0 <= e.a_n <= 1.0 and 0.0 <= e.a_m <= 1.0):
                    raise InvalidInputError(f"weights outside [0, 1] in {e}")
                if abs(e.a_n**2 + e.a_m**2 - 1.0) > 1e-14:
                    raise InvalidInputError(f"weights of {e} are not unit norm")

    @property
    def consumed_indices(self) -> list[int]:
        out = []
        for e in self.entries:
            if isinstance(e, Pair):
                out.extend((e.n, e.m))
            else:
                out.append(e.i)
        return out

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def pairs(self) -> list[Pair]:
        return [e for e in self.entries if isinstance(e, Pair)]

    @property
    def singletons(self) -> list[Singleton]:
        return [e for e in self.entries if isinstance(e, Singleton)]

    def block_values(self, eigenvalues) -> np.ndarray:
        """Rayleigh quotient of each plan vector: ``a_n^2 l_n + a_m^2 l_m`` or ``l_i``."""
        lam = np.asarray(eigenvalues, dtype=float)
        return np.array(
            [
                e.a_n**2 * lam[e.n] + e.a_m**2 * lam[e.m] if isinstance(e, Pair) else lam[e.i]
                for e in self.entries
            ]
        )

    def residual(self, eigenvalues) -> float:
        """``max_j |eta_j - alpha|`` over plan entries (0 for an empty plan)."""
        eta = self.block_values(eigenvalues)
        return float(np.max(np.abs(eta - self.alpha))) if eta.size else 0.0


def _close(x: float, alpha: float) -> bool:
    return abs(x - alpha) <= EQUAL_RTOL * (1.0 + abs(alpha))


def pair_weights(lam_n: float, lam_m: float, alpha: float) -> tuple[float, float]:
    """Weights ``(a_n, a_m)`` in [0, 1] with ``a_n^2 + a_m^2 = 1`` hitting ``alpha``.

    Raises InfeasibleAlphaError when ``alpha`` is outside ``[lam_n, lam_m]``.
    """
    if lam_n > lam_m:
        raise InvalidInputError("pair must be ordered lam_n <= lam_m")
    slack = EQUAL_RTOL * (1.0 + abs(alpha))
    if alpha < lam_n - slack or alpha > lam_m + slack:
        raise InfeasibleAlphaError(
            f"alpha={alpha!r} is outside [{lam_n!r}, {lam_m!r}]"
        )
    gap = lam_m - lam_n
    if gap == 0.0:
        if not _close(lam_n, alpha):
            raise InfeasibleAlphaError(f"equal eigenvalues {lam_n!r} cannot reach alpha={alpha!r}")
        return 1.0, 0.0
    wm = min(max((alpha - lam_n) / gap, 0.0), 1.0)
    wn = 1.0 - wm
    return math.sqrt(wn), math.sqrt(wm)


def _median_singleton(lam: np.ndarray) -> int:
    mid = (lam.size - 1) // 2
    i = mid
    while i > 0 and lam[i - 1] == lam[mid]:
        i -= 1
    return i


def _symmetric_pairs(lam: np.ndarray):
    """Singleton index (or None) and the symmetric index pairs of a sorted spectrum."""
    idx = list(range(lam.size))
    single = None
    if lam.size % 2:
        single = _median_singleton(lam)
        idx.remove(single)
    half = len(idx) // 2
    pairs = [(idx[j], idx[-1 - j]) for j in range(half)]
    return single, pairs


def _check_sorted(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidInputError("need a nonempty 1-d eigenvalue list")
    if not np.all(np.isfinite(lam)):
        raise InvalidInputError("eigenvalues must be finite")
    if np.any(np.diff(lam) < 0):
        raise InvalidInputError("eigenvalues must be sorted ascending")
    return lam


def _feasibility_violation(lam, alpha):
    single, pairs = _symmetric_pairs(lam)
    if single is not None and not _close(lam[single], alpha):
        return f"singleton index {single} has eigenvalue {lam[single]!r} != alpha"
    for n, m in pairs:
        try:
            pair_weights(lam[n], lam[m], alpha)
        except InfeasibleAlphaError as exc:
            return f"pair ({n}, {m}): {exc}"
    return None


def choose_alpha(eigenvalues, override: float | None = None) -> float:
    """Target ``alpha`` for the symmetric pairing of a sorted spectrum.

    Midpoint of the central gap for even length, the median for odd length.
    An ``override`` is returned as-is once checked feasible.
    """
    lam = _check_sorted(eigenvalues)
    if override is not None:
        override = float(override)
        problem = _feasibility_violation(lam, override)
        if problem:
            raise InfeasibleAlphaError(f"alpha override {override!r} infeasible: {problem}")
        return override
    d = lam.size
    if d % 2:
        return float(lam[d // 2])
    return float(0.5 * (lam[d // 2 - 1] + lam[d // 2]))


def build_pairing(eigenvalues, alpha: float) -> PairingPlan:
    """Pair index ``j`` with ``d-1-j``; odd ``d`` leaves one singleton at the median."""
    lam = _check_sorted(eigenvalues)
    alpha = float(alpha)
    single, pairs = _symmetric_pairs(lam)
    entries: list[Entry] = []
    if single is not None:
        if not _close(lam[single], alpha):
            raise InfeasibleAlphaError(
                f"odd dimension needs the median eigenvalue {lam[single]!r} to equal alpha={alpha!r}"
            )
        entries.append(Singleton(single))
    for n, m in pairs:
        try:
            a_n, a_m = pair_weights(lam[n], lam[m], alpha)
        except InfeasibleAlphaError as exc:
            raise InfeasibleAlphaError(f"pair ({n}, {m}): {exc}") from None
        entries.append(Pair(n, m, a_n, a_m))
    return PairingPlan(alpha, entries)


def plan_basis(vectors, plan: PairingPlan) -> np.ndarray:
    """Columns ``a_n v_n + a_m v_m`` (or ``v_i``) for each plan entry."""
    vectors = np.asarray(vectors, dtype=float)
    d = vectors.shape[1]
    cols = []
    for e in plan.entries:
        idx = (e.n, e.m) if isinstance(e, Pair) else (e.i,)
        if any(i < 0 or i >= d for i in idx):
            raise InvalidInputError(f"plan index out of range 0..{d - 1}: {e}")
        if isinstance(e, Pair):
            cols.append(e.a_n * vectors[:, e.n] + e.a_m * vectors[:, e.m])
        else:
            cols.append(vectors[:, e.i].copy())
    if not cols:
        return np.zeros((vectors.shape[0], 0))
    return np.column_stack(cols)


def pairing_projection(eig: EigenDecomp, plan: PairingPlan) -> Projection:
    """Projection onto the span of the plan's block vectors."""
    return Projection(eig.dim, plan_basis(eig.eigenvectors, plan))


def eigenspace_projection(eig: EigenDecomp, alpha: float, tol: float) -> Projection:
    """Projection onto the eigenvectors with ``|lambda - alpha| <= tol`` (rank may be 0)."""
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    mask = np.abs(eig.eigenvalues - alpha) <= tol
    return Projection(eig.dim, eig.eigenvectors[:, mask])


class TightenResult(NamedTuple):
    projection: Projection
    alpha: float
    certificate: TightnessCertificate


def tighten(
    frame,
    alpha_override: float | None = None,
    tol: float | None = None,
    probes: int = DEFAULT_PROBES,
    seed: int = DEFAULT_SEED,
    backend=None,
) -> TightenResult:
    """Project ``frame`` onto a subspace where it becomes tight.

    Runs frame operator -> Jacobi -> alpha -> pairing -> projection ->
    certificate. The result has rank ``ceil(d / 2)``, except that an already
    tight frame returns ``P = I``. ``tol`` defaults to ``1e-9 * (1 + ||S||_max)``.

    Raises:
        InfeasibleAlphaError: ``alpha_override`` cannot be reached.
        CertificateError: the constructed projection failed verification.
    """
    frame = frame if isinstance(frame, FrameSpec) else FrameSpec.from_vectors(frame)
    s = frame_operator(frame)
    if tol is None:
        tol = 1e-9 * (1.0 + max_norm(s.entries))
    eig = jacobi_eigh(s, backend=backend)
    lam = eig.eigenvalues

    spread = float(lam[-1] - lam[0])
    if alpha_override is None and spread <= EQUAL_RTOL * (1.0 + abs(float(lam[-1]))):
        alpha = float(np.mean(lam))
        p = Projection.identity(frame.dim)
    else:
        alpha = choose_alpha(lam, alpha_override)
        plan = build_pairing(lam, alpha)
        p = pairing_projection(eig, plan)
    if not alpha > 0:
        raise InvalidInputError(f"frame operator gives non-positive alpha={alpha!r}; the frame is zero")

    cert = verify_tight(frame, p, alpha, tol=tol, probes=probes, seed=seed)
    if not cert.passed:
        raise CertificateError(
            f"tightened projection failed its certificate: compression residual "
            f"{cert.residual_compression:.3e}, reconstruction residual "
            f"{cert.residual_reconstruction:.3e}, tolerance {cert.tolerance:.3e}"
        )
    return TightenResult(p, alpha, cert)
