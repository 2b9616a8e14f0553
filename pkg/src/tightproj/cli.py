"""Command-line interface.

    tightproj analyze FRAME.json
    tightproj tighten FRAME.json [--alpha auto|X] [--tol T] [--seed S] [--out P.json]
    tightproj classify MODEL.json
    tightproj multop SYMBOL.json [--n N] [--tol T]
    tightproj verify FRAME.json PROJ.json [--alpha auto|X] [--tol T] [--seed S]

Every command prints a JSON report. Exit codes: 0 success/pass, 1 certificate
fail, 2 invalid input, 3 infeasible alpha or mathematical obstruction.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import io
from .errors import InvalidInputError, TightProjError
from .linalg import DEFAULT_SEED, frame_operator, is_tight, jacobi_eigh, max_norm, verify_tight
from .multop import tighten_multop
from .pairing import tighten
from .spectrum import classify

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_OBSTRUCTION = 0, 1, 2, 3


def _alpha_arg(text: str):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a float or 'auto', got {text!r}") from None


def _emit(doc, out):
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_analyze(args) -> int:
    frame = io.frame_from_dict(io.read_json(args.path))
    w = jacobi_eigh(frame_operator(frame)).eigenvalues
    a, b = max(float(w[0]), 0.0), max(float(w[-1]), 0.0)
    report = {
        "dim": frame.dim,
        "count": frame.count,
        "frame_bounds": {"A": a, "B": b},
        "spanning": a > 0,
        "tight": is_tight(frame),
        "eigenvalues": [float(x) for x in w],
        "version": __version__,
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_tighten(args) -> int:
    frame = io.frame_from_dict(io.read_json(args.path))
    result = tighten(frame, alpha_override=args.alpha, tol=args.tol, seed=args.seed)
    _emit(
        {
            "alpha": result.alpha,
            "projection": io.projection_to_dict(result.projection),
            "certificate": io.certificate_to_dict(result.certificate),
        },
        args.out,
    )
    return EXIT_OK if result.certificate.passed else EXIT_FAIL


def cmd_classify(args) -> int:
    model = io.model_from_dict(io.read_json(args.path))
    doc = io.classification_to_dict(classify(model))
    doc["version"] = __version__
    _emit(doc, args.out)
    return EXIT_OK


def cmd_multop(args) -> int:
    spec, partition = io.multop_from_dict(io.read_json(args.path))
    result = tighten_multop(spec, args.n, tol=args.tol, partition=partition)
    _emit(
        {
            "alpha": result.alpha,
            "certificate": io.multop_certificate_to_dict(result.certificate),
            "plan": io.plan_to_dict(result.plan),
            "stage1": io.block_system_to_dict(result.stage1),
        },
        args.out,
    )
    return EXIT_OK if result.certificate.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    frame = io.frame_from_dict(io.read_json(args.frame_path))
    proj = io.projection_from_dict(io.read_json(args.proj_path))
    alpha = args.alpha
    if alpha is None:
        if proj.rank == 0:
            raise InvalidInputError("cannot infer alpha for a rank-0 projection; pass --alpha")
        s = frame_operator(frame).entries
        q = proj.basis
        alpha = float(np.trace(q.T @ s @ q)) / proj.rank
    cert = verify_tight(frame, proj, alpha, tol=args.tol, seed=args.seed)
    _emit(io.certificate_to_dict(cert), args.out)
    return EXIT_OK if cert.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tightproj", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="frame bounds and tightness of a frame")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tighten", help="project a frame to a tight frame for a subspace")
    p.add_argument("path")
    p.add_argument("--alpha", type=_alpha_arg, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_tighten)

    p = sub.add_parser("classify", help="projectability of a spectrum model")
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("multop", help="tight compression of a multiplication operator")
    p.add_argument("path")
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_multop)

    p = sub.add_parser("verify", help="certify a projection of a frame")
    p.add_argument("frame_path")
    p.add_argument("proj_path")
    p.add_argument("--alpha", type=_alpha_arg, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except TightProjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
