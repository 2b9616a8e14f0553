"""Projectability of modeled infinite-dimensional positive operators.

An operator is modeled by its eigenvalue sequence, drawn from one of five
closed-form families, together with declared limit points and how many terms
lie strictly below / at-or-above each. The decision follows the dichotomy:
projectable to ``alpha P`` on an infinite-rank ``P`` unless ``E = beta + K``
with ``K`` compact and having finitely many nonnegative or finitely many
nonpositive eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractError, InsufficientTruncationError, InvalidInputError, ModelError
from .pairing import EQUAL_RTOL, Pair, PairingPlan, Singleton, pair_weights

FINITE = "finite"
INFINITE = "infinite"

FAMILIES = ("ExplicitTail", "HarmonicShift", "Alternating", "TwoCluster", "CompactDecay")

_PARAMS = {
    "ExplicitTail": ("head", "tail"),
    "HarmonicShift": ("beta", "c", "p"),
    "Alternating": ("beta", "c", "p"),
    "TwoCluster": ("beta1", "c1", "beta2", "c2"),
    "CompactDecay": ("c", "r", "shift"),
}
_OPTIONAL = {"CompactDecay": {"shift": 0.0}}

VALIDATION_TERMS = 10_000
CLUSTER_RADIUS = 1e-3
CLUSTER_MIN_TERMS = 100


@dataclass(frozen=True)
class LimitPoint:
    value: float
    below: str
    at_or_above: str

    def __post_init__(self):
        for side in (self.below, self.at_or_above):
            if side not in (FINITE, INFINITE):
                raise ModelError(f"side count must be 'finite' or 'infinite', got {side!r}")
        object.__setattr__(self, "value", float(self.value))

    @property
    def two_sided(self) -> bool:
        return self.below == INFINITE and self.at_or_above == INFINITE


def _same_value(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * (1.0 + abs(a))


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """Eigenvalue-sequence model ``lambda_1, lambda_2, ...`` of a positive operator.

    Construction validates the declared limit points against the closed form
    and against a numeric truncation of ``VALIDATION_TERMS`` terms; any
    disagreement raises ``ModelError``.
    """

    family: str
    params: dict
    limit_points: tuple = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        params = dict(_OPTIONAL.get(self.family, {}))
        params.update(self.params)
        missing = [k for k in _PARAMS[self.family] if k not in params]
        extra = [k for k in params if k not in _PARAMS[self.family]]
        if missing or extra:
            raise ModelError(f"{self.family} params: missing {missing}, unexpected {extra}")
        try:
            if self.family == "ExplicitTail":
                params["head"] = tuple(float(x) for x in params["head"])
                params["tail"] = float(params["tail"])
            else:
                params = {k: float(v) for k, v in params.items()}
        except (TypeError, ValueError) as exc:
            raise ModelError(f"non-numeric parameter: {exc}") from None
        values = list(params["head"]) + [params["tail"]] if self.family == "ExplicitTail" else list(params.values())
        if not all(math.isfinite(v) for v in values):
            raise ModelError("parameters must be finite")
        self._check_ranges(params)
        object.__setattr__(self, "params", params)

        pts = tuple(
            lp if isinstance(lp, LimitPoint) else LimitPoint(**lp) for lp in self.limit_points
        )
        object.__setattr__(self, "limit_points", tuple(sorted(pts, key=lambda lp: lp.value)))
        self._validate_declaration()
        self._validate_truncation()

    def _check_ranges(self, p):
        fam = self.family
        if fam in ("HarmonicShift", "Alternating") and not p["p"] > 0:
            raise ModelError("exponent p must be positive")
        if fam == "TwoCluster" and not p["beta1"] < p["beta2"]:
            raise ModelError("TwoCluster needs beta1 < beta2")
        if fam == "CompactDecay" and not 0 < p["r"] < 1:
            raise ModelError("CompactDecay needs 0 < r < 1")

    # closed forms -------------------------------------------------------

    def terms(self, n: int) -> np.ndarray:
        """``lambda_1 .. lambda_n``."""
        p = self.params
        k = np.arange(1, n + 1, dtype=float)
        fam = self.family
        if fam == "ExplicitTail":
            head = np.asarray(p["head"][:n], dtype=float)
            return np.concatenate([head, np.full(n - head.size, p["tail"])])
        if fam == "HarmonicShift":
            return p["beta"] - p["c"] / k**p["p"]
        if fam == "Alternating":
            sign = np.where(np.arange(1, n + 1) % 2 == 0, 1.0, -1.0)
            return p["beta"] + sign * p["c"] / k**p["p"]
        if fam == "TwoCluster":
            # odd positions 2j-1 -> beta1 + c1/j, even positions 2j -> beta2 - c2/j
            j = np.ceil(k / 2.0)
            return np.where(k % 2 == 1, p["beta1"] + p["c1"] / j, p["beta2"] - p["c2"] / j)
        return p["shift"] + p["c"] * p["r"] ** k

    def exact_limit_points(self) -> tuple[LimitPoint, ...]:
        """Limit points and side counts read off the closed form."""
        p = self.params
        fam = self.family
        if fam == "ExplicitTail":
            return (LimitPoint(p["tail"], FINITE, INFINITE),)
        if fam == "HarmonicShift":
            # beta - c/n^p: c > 0 approaches from below
            below = INFINITE if p["c"] > 0 else FINITE
            above = FINITE if p["c"] > 0 else INFINITE
            return (LimitPoint(p["beta"], below, above),)
        if fam == "Alternating":
            if p["c"] == 0:
                return (LimitPoint(p["beta"], FINITE, INFINITE),)
            return (LimitPoint(p["beta"], INFINITE, INFINITE),)
        if fam == "TwoCluster":
            low = LimitPoint(p["beta1"], INFINITE if p["c1"] < 0 else FINITE, INFINITE)
            high = LimitPoint(p["beta2"], INFINITE, FINITE if p["c2"] > 0 else INFINITE)
            return (low, high)
        below = INFINITE if p["c"] < 0 else FINITE
        above = FINITE if p["c"] < 0 else INFINITE
        return (LimitPoint(p["shift"], below, above),)

    def infinite_multiplicity_values(self) -> list[float]:
        """Values taken by infinitely many terms (eigenvalues of infinite multiplicity)."""
        p = self.params
        fam = self.family
        if fam == "ExplicitTail":
            return [p["tail"]]
        if fam in ("HarmonicShift", "Alternating"):
            return [p["beta"]] if p["c"] == 0 else []
        if fam == "TwoCluster":
            out = []
            if p["c1"] == 0:
                out.append(p["beta1"])
            if p["c2"] == 0:
                out.append(p["beta2"])
            return out
        return [p["shift"]] if p["c"] == 0 else []

    def count_not_equal(self, alpha: float) -> float:
        """Number of terms different from ``alpha``: an int, or ``math.inf``."""
        fam = self.family
        p = self.params
        if fam == "ExplicitTail":
            if not _same_value(p["tail"], alpha):
                return math.inf
            return sum(1 for h in p["head"] if not _same_value(h, alpha))
        vals = self.infinite_multiplicity_values()
        if fam != "TwoCluster" and vals and _same_value(vals[0], alpha):
            return 0
        return math.inf

    # validation ---------------------------------------------------------

    def _validate_declaration(self):
        declared = self.limit_points
        exact = self.exact_limit_points()
        if len(declared) != len(exact):
            raise ModelError(
                f"declared {len(declared)} limit point(s), the {self.family} sequence has {len(exact)}"
            )
        for d, e in zip(declared, exact):
            if not _same_value(d.value, e.value):
                raise ModelError(f"declared limit point {d.value!r} does not match {e.value!r}")
            if (d.below, d.at_or_above) != (e.below, e.at_or_above):
                raise ModelError(
                    f"limit point {d.value!r}: declared below/at_or_above "
                    f"{d.below}/{d.at_or_above}, sequence gives {e.below}/{e.at_or_above}"
                )

    def _validate_truncation(self):
        lam = self.terms(VALIDATION_TERMS)
        if np.any(lam < 0):
            i = int(np.argmax(lam < 0))
            raise ModelError(f"sequence is not positive: lambda_{i + 1} = {lam[i]!r}")
        for lp in self.limit_points:
            near = int(np.count_nonzero(np.abs(lam - lp.value) <= CLUSTER_RADIUS))
            if near < CLUSTER_MIN_TERMS:
                raise ModelError(
                    f"declared limit point {lp.value!r} has only {near} of {VALIDATION_TERMS} "
                    f"terms within {CLUSTER_RADIUS}"
                )
        # gap heuristic on the back half: every large cluster must sit at a declared point
        tail = np.sort(lam[VALIDATION_TERMS // 2 :])
        breaks = np.flatnonzero(np.diff(tail) > CLUSTER_RADIUS) + 1
        for chunk in np.split(tail, breaks):
            if chunk.size < CLUSTER_MIN_TERMS:
                continue
            lo, hi = chunk[0] - CLUSTER_RADIUS, chunk[-1] + CLUSTER_RADIUS
            if not any(lo <= lp.value <= hi for lp in self.limit_points):
                raise ModelError(
                    f"undeclared cluster of {chunk.size} terms in [{chunk[0]!r}, {chunk[-1]!r}]"
                )

    # transformations ----------------------------------------------------

    def shifted(self, b: float) -> SpectrumModel:
        """Model of ``E + b``."""
        p = dict(self.params)
        fam = self.family
        if fam == "ExplicitTail":
            p["head"] = [h + b for h in p["head"]]
            p["tail"] += b
        elif fam in ("HarmonicShift", "Alternating"):
            p["beta"] += b
        elif fam == "TwoCluster":
            p["beta1"] += b
            p["beta2"] += b
        else:
            p["shift"] += b
        pts = [LimitPoint(lp.value + b, lp.below, lp.at_or_above) for lp in self.limit_points]
        return SpectrumModel(fam, p, pts)

    def scaled(self, s: float) -> SpectrumModel:
        """Model of ``s E`` for ``s > 0``."""
        if not s > 0:
            raise InvalidInputError("scale must be positive")
        p = dict(self.params)
        if self.family == "ExplicitTail":
            p["head"] = [s * h for h in p["head"]]
            p["tail"] *= s
        else:
            for key in ("beta", "c", "beta1", "c1", "beta2", "c2", "shift"):
                if key in p:
                    p[key] *= s
        pts = [LimitPoint(s * lp.value, lp.below, lp.at_or_above) for lp in self.limit_points]
        return SpectrumModel(self.family, p, pts)

    # declared-by-construction helpers -------------------------------------

    @classmethod
    def _auto(cls, family, params):
        probe = object.__new__(cls)
        object.__setattr__(probe, "family", family)
        full = dict(_OPTIONAL.get(family, {}))
        full.update(params)
        object.__setattr__(probe, "params", full)
        return cls(family, params, probe.exact_limit_points())

    @classmethod
    def explicit_tail(cls, head, tail):
        return cls._auto("ExplicitTail", {"head": [float(h) for h in head], "tail": float(tail)})

    @classmethod
    def harmonic_shift(cls, beta, c, p):
        return cls._auto("HarmonicShift", {"beta": float(beta), "c": float(c), "p": float(p)})

    @classmethod
    def alternating(cls, beta, c, p):
        return cls._auto("Alternating", {"beta": float(beta), "c": float(c), "p": float(p)})

    @classmethod
    def two_cluster(cls, beta1, beta2, c1=0.25, c2=0.25):
        return cls._auto(
            "TwoCluster",
            {"beta1": float(beta1), "c1": float(c1), "beta2": float(beta2), "c2": float(c2)},
        )

    @classmethod
    def compact_decay(cls, c, r, shift=0.0):
        return cls._auto("CompactDecay", {"c": float(c), "r": float(r), "shift": float(shift)})


class Verdict(str, Enum):
    PROJECTABLE_EIGENSPACE = "ProjectableEigenspace"
    PROJECTABLE_TWO_LIMIT_POINTS = "ProjectableTwoLimitPoints"
    PROJECTABLE_ONE_LIMIT_POINT = "ProjectableOneLimitPoint"
    NOT_PROJECTABLE_FK = "NotProjectable_FK"
    NOT_APPLICABLE_COMPACT = "NotApplicable_Compact"

    @property
    def projectable(self) -> bool:
        return self.value.startswith("Projectable")


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    alpha: float | None
    witness: dict

    def __post_init__(self):
        object.__setattr__(self, "verdict", Verdict(self.verdict))
        if self.verdict.projectable != (self.alpha is not None):
            raise InvalidInputError("alpha must be present exactly for projectable verdicts")
        if self.alpha is not None and not self.alpha > 0:
            raise InvalidInputError("alpha must be positive")

    @property
    def projectable(self) -> bool:
        return self.verdict.projectable


def _translate_signs(model: SpectrumModel, lp: LimitPoint) -> dict:
    """Sign counts of ``K = E - beta`` and of its reflection ``beta - E``."""
    infinite_mult = any(_same_value(v, lp.value) for v in model.infinite_multiplicity_values())
    nonneg = lp.at_or_above
    nonpos = INFINITE if (lp.below == INFINITE or infinite_mult) else FINITE
    return {
        "beta": lp.value,
        "k_equals_e_minus_beta": {"nonnegative": nonneg, "nonpositive": nonpos},
        "k_equals_beta_minus_e": {"nonnegative": nonpos, "nonpositive": nonneg},
        "in_fk": nonneg == FINITE or nonpos == FINITE,
    }


def _lp_dict(lp: LimitPoint) -> dict:
    return {"value": lp.value, "below": lp.below, "at_or_above": lp.at_or_above}


def classify(model: SpectrumModel) -> Classification:
    """Decide whether some infinite-rank ``P`` and ``alpha > 0`` give ``PEP = alpha P``.

    Cases, in order: an eigenvalue ``alpha > 0`` of infinite multiplicity;
    two or more limit points (``alpha`` = midpoint of the two smallest); a
    single limit point ``x > 0`` approached from both sides (``alpha = x``);
    a single one-sided limit point ``x > 0`` (FK translate, not projectable);
    a single limit point at 0 (compact, outside the theorem's hypothesis).
    """
    pts = model.limit_points
    if not pts:
        raise ModelError("model declares no limit points")
    positive_mult = sorted(v for v in model.infinite_multiplicity_values() if v > 0)
    if positive_mult:
        alpha = positive_mult[0]
        return Classification(
            Verdict.PROJECTABLE_EIGENSPACE,
            alpha,
            {"eigenvalue": alpha, "multiplicity": INFINITE, "limit_points": [_lp_dict(lp) for lp in pts]},
        )
    if len(pts) >= 2:
        x, y = pts[0].value, pts[1].value
        alpha = 0.5 * (x + y)
        return Classification(
            Verdict.PROJECTABLE_TWO_LIMIT_POINTS,
            alpha,
            {
                "limit_points": [_lp_dict(lp) for lp in pts],
                "x": x,
                "y": y,
                "below_alpha": INFINITE,
                "at_or_above_alpha": INFINITE,
            },
        )
    lp = pts[0]
    if lp.value <= 0:
        return Classification(
            Verdict.NOT_APPLICABLE_COMPACT,
            None,
            {
                "limit_point": lp.value,
                "below": lp.below,
                "at_or_above": lp.at_or_above,
                "reason": "terms tend to 0, so the operator is compact",
            },
        )
    signs = _translate_signs(model, lp)
    witness = {"limit_point": lp.value, "below": lp.below, "at_or_above": lp.at_or_above, **signs}
    if lp.two_sided:
        return Classification(Verdict.PROJECTABLE_ONE_LIMIT_POINT, lp.value, witness)
    return Classification(Verdict.NOT_PROJECTABLE_FK, None, witness)


def find_alpha_infinite(model: SpectrumModel) -> float:
    """The ``alpha`` with infinitely many terms below and at-or-above it."""
    c = classify(model)
    if not c.projectable:
        raise ContractError(f"model is not projectable ({c.verdict.value})")
    return c.alpha


def fk_membership(shift: float, model: SpectrumModel) -> bool:
    """Whether ``K = E - shift`` has finitely many nonnegative or nonpositive eigenvalues.

    Requires ``shift`` to be the model's only limit point (so ``K`` is compact).
    """
    pts = model.limit_points
    if len(pts) != 1 or not _same_value(pts[0].value, float(shift)):
        raise ContractError(
            f"shift {shift!r} is not the single limit point of the model "
            f"(limit points: {[lp.value for lp in pts]})"
        )
    return _translate_signs(model, pts[0])["in_fk"]


@dataclass(frozen=True)
class TruncationReport:
    terms: int
    rank: int
    below: int
    at_or_above: int
    surplus: int
    surplus_side: str | None
    residual: float


def truncated_plan(model: SpectrumModel, n: int) -> tuple[PairingPlan, TruncationReport]:
    """Order-preserving pairing of ``lambda_1 .. lambda_n`` across the classified ``alpha``.

    The j-th term below ``alpha`` is paired with the j-th term at-or-above it;
    the unmatched surplus of the longer side is dropped and reported. In the
    infinite-multiplicity case the plan is the singletons with ``lambda = alpha``.
    """
    if n < 2:
        raise InvalidInputError("truncation length must be at least 2")
    c = classify(model)
    if not c.projectable:
        raise ContractError(f"model is not projectable ({c.verdict.value})")
    alpha = c.alpha
    lam = model.terms(n)

    if c.verdict is Verdict.PROJECTABLE_EIGENSPACE:
        hits = [i for i in range(n) if abs(lam[i] - alpha) <= EQUAL_RTOL * (1.0 + alpha)]
        if not hits:
            raise InsufficientTruncationError(f"no term equals alpha={alpha!r} among the first {n}")
        plan = PairingPlan(alpha, [Singleton(i) for i in hits])
        report = TruncationReport(n, len(hits), 0, len(hits), 0, None, plan.residual(lam))
        return plan, report

    below = [i for i in range(n) if lam[i] < alpha]
    above = [i for i in range(n) if lam[i] >= alpha]
    k = min(len(below), len(above))
    if k == 0:
        raise InsufficientTruncationError(
            f"first {n} terms have {len(below)} below and {len(above)} at-or-above alpha={alpha!r}"
        )
    entries = []
    for i, j in zip(below[:k], above[:k]):
        a_n, a_m = pair_weights(lam[i], lam[j], alpha)
        entries.append(Pair(i, j, a_n, a_m))
    plan = PairingPlan(alpha, entries)
    surplus = abs(len(below) - len(above))
    side = None if surplus == 0 else ("below" if len(below) > len(above) else "at_or_above")
    report = TruncationReport(n, k, len(below), len(above), surplus, side, plan.residual(lam))
    return plan, report
