"""Multiplication operators ``(M f)(x) = phi(x) f(x)`` on ``L^2[a, b)``.

The symbol ``phi`` is piecewise polynomial, so preimages of value intervals
are finite unions of intervals (found by root isolation) and integrals of
``phi`` over them are exact up to rounding. Normalized indicators of
disjoint sets are eigenvectors of the compression of ``M`` to their span,
with eigenvalue the average of ``phi`` over the set. Two families of such
blocks, drawn from preimages of two disjoint value balls, give a diagonal
operator with infinitely many eigenvalues near two distinct points; pairing
them across a middle value compresses ``M`` to ``alpha P``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import polynomial as poly
from .errors import (
    CertificateError,
    InvalidInputError,
    NotApplicableError,
    PartitionExhaustedError,
)
from .intervals import IntervalSet
from .pairing import EQUAL_RTOL, Pair, PairingPlan, Singleton, build_pairing, choose_alpha

MAX_DEGREE = 8
MAX_SHRINK_STEPS = 64


@dataclass(frozen=True)
class Piece:
    start: float
    end: float
    coeffs: tuple

    @property
    def constant(self) -> bool:
        return poly.degree(self.coeffs) == 0


@dataclass(frozen=True, eq=False)
class MultOpSpec:
    """Piecewise-polynomial symbol on ``[a, b)``.

    ``pieces`` is a list of ``(end, coeffs)``: each piece runs from the previous
    end (or ``a``) to ``end``, with ``coeffs`` ascending in absolute ``x``.
    """

    domain: tuple
    pieces: tuple

    def __post_init__(self):
        try:
            a, b = (float(t) for t in self.domain)
        except (TypeError, ValueError):
            raise InvalidInputError(f"domain must be [a, b], got {self.domain!r}") from None
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InvalidInputError(f"domain must be a bounded interval with a < b, got [{a}, {b})")
        if not self.pieces:
            raise InvalidInputError("symbol needs at least one piece")
        built = []
        start = a
        for raw in self.pieces:
            if isinstance(raw, Piece):
                end, coeffs = raw.end, raw.coeffs
            elif isinstance(raw, dict):
                end, coeffs = raw["end"], raw["coeffs"]
            else:
                end, coeffs = raw
            end = float(end)
            coeffs = tuple(float(c) for c in coeffs)
            if not coeffs or len(coeffs) > MAX_DEGREE + 1:
                raise InvalidInputError(f"each piece needs 1..{MAX_DEGREE + 1} coefficients")
            if not all(math.isfinite(c) for c in coeffs):
                raise InvalidInputError("coefficients must be finite")
            if not end > start:
                raise InvalidInputError(f"piece ends must increase (got {end} after {start})")
            built.append(Piece(start, end, coeffs))
            start = end
        if start != b:
            raise InvalidInputError(f"pieces end at {start}, domain ends at {b}")
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "pieces", tuple(built))

    @classmethod
    def polynomial(cls, coeffs, a: float = 0.0, b: float = 1.0) -> MultOpSpec:
        return cls((a, b), ((b, tuple(coeffs)),))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, np.nan)
        for pc in self.pieces:
            mask = (x >= pc.start) & (x < pc.end)
            out[mask] = poly.evaluate(pc.coeffs, x[mask])
        return out

    @property
    def measure(self) -> float:
        return self.domain[1] - self.domain[0]

    def extrema(self) -> tuple[float, float]:
        """Essential infimum and supremum (the symbol is continuous on each piece)."""
        lows, highs = zip(*(poly.extrema(pc.coeffs, pc.start, pc.end) for pc in self.pieces))
        return min(lows), max(highs)

    @property
    def nonnegative(self) -> bool:
        return self.extrema()[0] >= 0.0

    @property
    def has_flat_piece(self) -> bool:
        return any(pc.constant for pc in self.pieces)

    def preimage(self, lo: float, hi: float) -> IntervalSet:
        """``{x : lo <= phi(x) < hi}``, exact up to finitely many points."""
        spans = []
        for pc in self.pieces:
            c = poly.trim(pc.coeffs)
            cuts = {pc.start, pc.end}
            for level in (lo, hi):
                if math.isfinite(level):
                    shifted = (c[0] - level,) + c[1:]
                    cuts.update(poly.real_roots(shifted, pc.start, pc.end))
            knots = sorted(cuts)
            for u, v in zip(knots[:-1], knots[1:]):
                val = poly.horner(c, 0.5 * (u + v))
                if lo <= val < hi:
                    spans.append((u, v))
        return IntervalSet(tuple(spans))

    def integral(self, s: IntervalSet) -> float:
        """``int_s phi dx``."""
        total = 0.0
        for lo, hi in s:
            for pc in self.pieces:
                u, v = max(lo, pc.start), min(hi, pc.end)
                if u < v:
                    total += poly.integrate(pc.coeffs, u, v)
        return total


class RangePair(NamedTuple):
    x: float
    y: float
    ball_x: tuple
    ball_y: tuple


def essential_range_pair(spec: MultOpSpec) -> RangePair:
    """Two distinct essential-range points (the extremes) with disjoint-closure balls.

    Both balls have radius ``(y - x) / 4``.

    Raises:
        NotApplicableError: some piece is constant, so the symbol has point
            spectrum; split that part off and treat it as an eigenvalue.
    """
    if spec.has_flat_piece:
        raise NotApplicableError(
            "symbol is constant on a set of positive measure; that part is point spectrum, "
            "handle it through the eigenvalue pathway"
        )
    x, y = spec.extrema()
    rho = 0.25 * (y - x)
    return RangePair(x, y, (x - rho, x + rho), (y - rho, y + rho))


@dataclass(frozen=True)
class PartitionScheme:
    sets: tuple
    measures: tuple = ()

    def __post_init__(self):
        sets = tuple(s if isinstance(s, IntervalSet) else IntervalSet(tuple(map(tuple, s))) for s in self.sets)
        measures = tuple(s.measure for s in sets)
        for i, m in enumerate(measures):
            if not (m > 0 and math.isfinite(m)):
                raise InvalidInputError(f"set {i} has measure {m}, need 0 < measure < inf")
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if not (sets[i] & sets[j]).empty:
                    raise InvalidInputError(f"sets {i} and {j} overlap")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "measures", measures)

    def __len__(self):
        return len(self.sets)

    @property
    def union(self) -> IntervalSet:
        out = IntervalSet()
        for s in self.sets:
            out = out | s
        return out


def nested_balls(ball: tuple, center: float, n: int) -> tuple[float, float]:
    """The ``n``-th ball (``n = 0`` is ``ball`` itself), shrunk by ``2**-n`` toward ``center``."""
    lo, hi = ball
    scale = 0.5**n
    return center - (center - lo) * scale, center + (hi - center) * scale


def partition_preimage(
    spec: MultOpSpec, ball: tuple, count: int, center: float | None = None
) -> PartitionScheme:
    """Split ``phi^{-1}(ball)`` into ``count`` disjoint annular preimages.

    The balls ``B_1 = ball, B_2, ...`` shrink by half toward ``center``
    (default: the midpoint). Set ``n`` is ``phi^{-1}(B_n minus B_{n+1})``;
    annuli whose preimage is null are skipped.

    Raises:
        PartitionExhaustedError: fewer than ``count`` non-null annuli within
            64 shrink steps, i.e. ``center`` looks isolated in the range.
    """
    if count < 1:
        raise InvalidInputError("count must be positive")
    lo, hi = float(ball[0]), float(ball[1])
    if not lo < hi:
        raise InvalidInputError(f"ball must have lo < hi, got {ball!r}")
    center = 0.5 * (lo + hi) if center is None else float(center)
    if not lo <= center <= hi:
        raise InvalidInputError(f"center {center} lies outside the ball ({lo}, {hi})")
    sets = []
    for n in range(MAX_SHRINK_STEPS):
        olo, ohi = nested_balls((lo, hi), center, n)
        ilo, ihi = nested_balls((lo, hi), center, n + 1)
        annulus = spec.preimage(olo, ilo) | spec.preimage(ihi, ohi)
        if annulus.measure > 0:
            sets.append(annulus)
            if len(sets) == count:
                return PartitionScheme(tuple(sets))
    raise PartitionExhaustedError(
        f"found only {len(sets)} of {count} positive-measure annuli in {MAX_SHRINK_STEPS} steps "
        f"toward {center}; it may not be a limit point of the essential range"
    )


def symmetric_dyadic_partition(count: int) -> PartitionScheme:
    """Sets ``[2^-(i+1), 2^-i) U [1 - 2^-i, 1 - 2^-(i+1))`` for ``i = 1..count``."""
    return PartitionScheme(
        tuple(
            IntervalSet(((2.0 ** -(i + 1), 2.0**-i), (1.0 - 2.0**-i, 1.0 - 2.0 ** -(i + 1))))
            for i in range(1, count + 1)
        )
    )


@dataclass(frozen=True)
class BlockSystem:
    """Normalized indicators ``chi_X / sqrt(|X|)`` and their compressed eigenvalues."""

    sets: tuple
    coefficients: tuple
    eigenvalues: tuple

    def __post_init__(self):
        for s, c in zip(self.sets, self.coefficients):
            if abs(c * c * s.measure - 1.0) > 1e-12:
                raise InvalidInputError("block function is not normalized")

    def __len__(self):
        return len(self.sets)

    def gram(self) -> np.ndarray:
        n = len(self)
        g = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                g[i, j] = self.coefficients[i] * self.coefficients[j] * (self.sets[i] & self.sets[j]).measure
        return g

    def concat(self, other: BlockSystem) -> BlockSystem:
        return BlockSystem(
            self.sets + other.sets,
            self.coefficients + other.coefficients,
            self.eigenvalues + other.eigenvalues,
        )


def block_eigenvalues(spec: MultOpSpec, parts: PartitionScheme) -> BlockSystem:
    """Eigenvalue ``|X|^-1 int_X phi`` of each normalized indicator."""
    coeffs = tuple(1.0 / math.sqrt(m) for m in parts.measures)
    eta = tuple(spec.integral(s) / m for s, m in zip(parts.sets, parts.measures))
    return BlockSystem(parts.sets, coeffs, eta)


@dataclass(frozen=True)
class MultOpCertificate:
    alpha: float
    rank: int
    diagonal_residual: float
    cross_term_max: float
    orthonormality_residual: float
    tolerance: float
    passed: bool
    x: float | None = None
    y: float | None = None
    ball_x: tuple | None = None
    ball_y: tuple | None = None


class MultOpResult(NamedTuple):
    stage1: BlockSystem
    plan: PairingPlan
    alpha: float
    certificate: MultOpCertificate


def _components(stage1: BlockSystem, entry):
    if isinstance(entry, Pair):
        return [
            (stage1.sets[entry.n], entry.a_n * stage1.coefficients[entry.n]),
            (stage1.sets[entry.m], entry.a_m * stage1.coefficients[entry.m]),
        ]
    return [(stage1.sets[entry.i], stage1.coefficients[entry.i])]


def compressed_matrix(spec: MultOpSpec, stage1: BlockSystem, plan: PairingPlan):
    """``(<M h_j, h_k>, <h_j, h_k>)`` for the plan's functions ``h_j``, by direct integration."""
    comps = [_components(stage1, e) for e in plan.entries]
    r = len(comps)
    m = np.zeros((r, r))
    g = np.zeros((r, r))
    for j in range(r):
        for k in range(r):
            for sj, cj in comps[j]:
                for sk, ck in comps[k]:
                    common = sj & sk
                    if common.empty:
                        continue
                    m[j, k] += cj * ck * spec.integral(common)
                    g[j, k] += cj * ck * common.measure
    return m, g


def _stage2_plan(eta) -> PairingPlan:
    eta = np.asarray(eta, dtype=float)
    spread = float(eta.max() - eta.min())
    if spread <= EQUAL_RTOL * (1.0 + abs(float(eta.max()))):
        return PairingPlan(float(np.mean(eta)), [Singleton(i) for i in range(eta.size)])
    order = np.argsort(eta, kind="stable")
    sorted_plan = build_pairing(eta[order], choose_alpha(eta[order]))
    entries = []
    for e in sorted_plan.entries:
        if isinstance(e, Pair):
            entries.append(Pair(int(order[e.n]), int(order[e.m]), e.a_n, e.a_m))
        else:
            entries.append(Singleton(int(order[e.i])))
    return PairingPlan(sorted_plan.alpha, entries)


def tighten_multop(
    spec: MultOpSpec, n: int, tol: float = 1e-10, partition: PartitionScheme | None = None
) -> MultOpResult:
    """Find functions ``h_1..h_r`` with ``<M h_j, h_k> = alpha delta_jk``.

    Stage 1 builds normalized indicators: ``n`` from preimages of a ball
    around the essential infimum and ``n`` from a ball around the essential
    supremum (or, if ``partition`` is given, one per supplied set). Stage 2
    pairs their eigenvalues across ``alpha``. The certificate integrates the
    compressed operator afresh on the final functions.
    """
    if not spec.nonnegative:
        raise InvalidInputError("symbol must be nonnegative")
    ranges = None
    if partition is not None:
        stage1 = block_eigenvalues(spec, partition)
    else:
        if n < 2:
            raise InvalidInputError("n must be at least 2")
        ranges = essential_range_pair(spec)
        low = block_eigenvalues(spec, partition_preimage(spec, ranges.ball_x, n))
        high = block_eigenvalues(spec, partition_preimage(spec, ranges.ball_y, n))
        for eta, (lo, hi) in ((low.eigenvalues, ranges.ball_x), (high.eigenvalues, ranges.ball_y)):
            if not all(lo <= e <= hi for e in eta):
                raise CertificateError(f"block eigenvalue escaped its ball [{lo}, {hi}]")
        stage1 = low.concat(high)

    plan = _stage2_plan(stage1.eigenvalues)
    alpha = plan.alpha
    m, g = compressed_matrix(spec, stage1, plan)
    r = plan.rank
    diag = float(np.max(np.abs(np.diag(m) - alpha))) if r else 0.0
    off = m - np.diag(np.diag(m))
    cross = float(np.max(np.abs(off))) if r else 0.0
    ortho = float(np.max(np.abs(g - np.eye(r)))) if r else 0.0
    cert = MultOpCertificate(
        alpha=alpha,
        rank=r,
        diagonal_residual=diag,
        cross_term_max=cross,
        orthonormality_residual=ortho,
        tolerance=float(tol),
        passed=bool(diag <= tol and cross <= tol),
        x=ranges.x if ranges else None,
        y=ranges.y if ranges else None,
        ball_x=ranges.ball_x if ranges else None,
        ball_y=ranges.ball_y if ranges else None,
    )
    return MultOpResult(stage1, plan, alpha, cert)
