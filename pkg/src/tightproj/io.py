"""JSON encoding of the domain types.

Floats go through ``json``'s shortest round-trip repr, so decode(encode(x))
reproduces every float bit for bit. Decoders raise ``InvalidInputError`` on
malformed documents.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInputError
from .intervals import IntervalSet
from .linalg import FrameSpec, Projection, TightnessCertificate
from .multop import BlockSystem, MultOpCertificate, MultOpSpec, PartitionScheme
from .pairing import Pair, PairingPlan, Singleton
from .spectrum import Classification, LimitPoint, SpectrumModel


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from None


def _decoder(fn):
    def wrapped(doc):
        try:
            return fn(doc)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed {fn.__name__.replace('_from_dict', '')} document: {exc!r}") from None

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


def _floats(arr):
    return [[float(x) for x in row] for row in np.asarray(arr)]


# frames and projections


def frame_to_dict(frame: FrameSpec) -> dict:
    return {"dim": frame.dim, "vectors": _floats(frame.vectors)}


@_decoder
def frame_from_dict(doc) -> FrameSpec:
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise InvalidInputError(f"dim must be an integer, got {dim!r}")
    vectors = doc["vectors"]
    if not isinstance(vectors, list) or any(not isinstance(v, list) or len(v) != dim for v in vectors):
        raise InvalidInputError(f"vectors must be a list of length-{dim} lists")
    return FrameSpec(dim, np.array(vectors, dtype=float).reshape(len(vectors), dim))


def projection_to_dict(p: Projection) -> dict:
    return {"dim": p.dim, "rank": p.rank, "basis_columns": _floats(p.basis.T)}


@_decoder
def projection_from_dict(doc) -> Projection:
    dim, rank = int(doc["dim"]), int(doc["rank"])
    cols = np.array(doc["basis_columns"], dtype=float).reshape(rank, dim)
    return Projection(dim, cols.T, rank)


def certificate_to_dict(cert: TightnessCertificate) -> dict:
    return {
        "alpha": cert.alpha,
        "rank": cert.rank,
        "residual_compression": cert.residual_compression,
        "residual_reconstruction": cert.residual_reconstruction,
        "tolerance": cert.tolerance,
        "pass": cert.passed,
        "routes_agree": cert.routes_agree,
        "seed": cert.seed,
        "probes": cert.probes,
        "version": __version__,
    }


@_decoder
def certificate_from_dict(doc) -> TightnessCertificate:
    return TightnessCertificate(
        alpha=float(doc["alpha"]),
        rank=int(doc["rank"]),
        residual_compression=float(doc["residual_compression"]),
        residual_reconstruction=float(doc["residual_reconstruction"]),
        tolerance=float(doc["tolerance"]),
        passed=bool(doc["pass"]),
        seed=int(doc["seed"]),
        probes=int(doc["probes"]),
    )


# pairing plans


def plan_to_dict(plan: PairingPlan) -> dict:
    entries = []
    for e in plan.entries:
        if isinstance(e, Pair):
            entries.append({"type": "pair", "n": e.n, "m": e.m, "a_n": e.a_n, "a_m": e.a_m})
        else:
            entries.append({"type": "singleton", "i": e.i})
    return {"alpha": plan.alpha, "entries": entries}


@_decoder
def plan_from_dict(doc) -> PairingPlan:
    entries = []
    for e in doc["entries"]:
        if e["type"] == "pair":
            entries.append(Pair(int(e["n"]), int(e["m"]), float(e["a_n"]), float(e["a_m"])))
        elif e["type"] == "singleton":
            entries.append(Singleton(int(e["i"])))
        else:
            raise InvalidInputError(f"unknown plan entry type {e['type']!r}")
    return PairingPlan(float(doc["alpha"]), entries)


# spectrum models


def model_to_dict(model: SpectrumModel) -> dict:
    params = dict(model.params)
    if "head" in params:
        params["head"] = list(params["head"])
    return {
        "family": model.family,
        "params": params,
        "limit_points": [
            {"value": lp.value, "below": lp.below, "at_or_above": lp.at_or_above}
            for lp in model.limit_points
        ],
    }


@_decoder
def model_from_dict(doc) -> SpectrumModel:
    pts = [LimitPoint(float(lp["value"]), lp["below"], lp["at_or_above"]) for lp in doc["limit_points"]]
    return SpectrumModel(doc["family"], dict(doc["params"]), tuple(pts))


def classification_to_dict(c: Classification) -> dict:
    return {"verdict": c.verdict.value, "alpha": c.alpha, "witness": c.witness}


@_decoder
def classification_from_dict(doc) -> Classification:
    alpha = doc["alpha"]
    return Classification(doc["verdict"], None if alpha is None else float(alpha), dict(doc["witness"]))


# multiplication operators


def _set_to_list(s: IntervalSet):
    return [[lo, hi] for lo, hi in s]


def _set_from_list(spans) -> IntervalSet:
    return IntervalSet(tuple((float(lo), float(hi)) for lo, hi in spans))


def partition_to_list(parts: PartitionScheme) -> list:
    return [_set_to_list(s) for s in parts.sets]


@_decoder
def partition_from_list(doc) -> PartitionScheme:
    return PartitionScheme(tuple(_set_from_list(s) for s in doc))


def multop_to_dict(spec: MultOpSpec, partition: PartitionScheme | None = None) -> dict:
    doc = {
        "domain": [spec.domain[0], spec.domain[1]],
        "pieces": [{"end": pc.end, "coeffs": list(pc.coeffs)} for pc in spec.pieces],
    }
    if partition is not None:
        doc["partition"] = partition_to_list(partition)
    return doc


@_decoder
def multop_from_dict(doc) -> tuple[MultOpSpec, PartitionScheme | None]:
    """Symbol plus the optional pre-supplied ``partition`` (list of span lists)."""
    spec = MultOpSpec(tuple(doc["domain"]), tuple((pc["end"], pc["coeffs"]) for pc in doc["pieces"]))
    parts = doc.get("partition")
    return spec, (None if parts is None else partition_from_list(parts))


def block_system_to_dict(bs: BlockSystem) -> dict:
    return {
        "sets": [_set_to_list(s) for s in bs.sets],
        "coefficients": list(bs.coefficients),
        "eigenvalues": list(bs.eigenvalues),
    }


@_decoder
def block_system_from_dict(doc) -> BlockSystem:
    return BlockSystem(
        tuple(_set_from_list(s) for s in doc["sets"]),
        tuple(float(c) for c in doc["coefficients"]),
        tuple(float(e) for e in doc["eigenvalues"]),
    )


def multop_certificate_to_dict(cert: MultOpCertificate) -> dict:
    return {
        "alpha": cert.alpha,
        "rank": cert.rank,
        "diagonal_residual": cert.diagonal_residual,
        "cross_term_max": cert.cross_term_max,
        "orthonormality_residual": cert.orthonormality_residual,
        "tolerance": cert.tolerance,
        "pass": cert.passed,
        "x": cert.x,
        "y": cert.y,
        "ball_x": None if cert.ball_x is None else list(cert.ball_x),
        "ball_y": None if cert.ball_y is None else list(cert.ball_y),
        "version": __version__,
    }


@_decoder
def multop_certificate_from_dict(doc) -> MultOpCertificate:
    def opt_pair(v):
        return None if v is None else (float(v[0]), float(v[1]))

    return MultOpCertificate(
        alpha=float(doc["alpha"]),
        rank=int(doc["rank"]),
        diagonal_residual=float(doc["diagonal_residual"]),
        cross_term_max=float(doc["cross_term_max"]),
        orthonormality_residual=float(doc["orthonormality_residual"]),
        tolerance=float(doc["tolerance"]),
        passed=bool(doc["pass"]),
        x=None if doc["x"] is None else float(doc["x"]),
        y=None if doc["y"] is None else float(doc["y"]),
        ball_x=opt_pair(doc["ball_x"]),
        ball_y=opt_pair(doc["ball_y"]),
    )
