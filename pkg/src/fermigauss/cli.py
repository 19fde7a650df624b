"""Command-line front end with JSON input/output.

Every run writes a single JSON report (stdout by default) echoing the
configuration, the computed values and a list of named checks with
residuals; the exit status is 0 when all checks pass, 1 on a numeric
failure and 2 on invalid input.  Identical configurations produce
byte-identical reports: randomness goes through the seeded PCG64
generator and all sums run in a fixed order.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io, linalg
from .decompose import DEFAULT_EPSILONS, decompose, reconstruct
from .errors import FermiGaussError, ValidationError
from .gaussian import (
    GaussianParams,
    first_moments,
    materialize,
    two_mode_params,
)
from .sampling import random_gaussian_params
from .verify import (
    THEOREMS,
    check_first_moments,
    check_normalization,
    run_theorem,
)

__all__ = ["main", "build_parser"]

EXIT_PASS = 0
EXIT_NUMERIC = 1
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermigauss",
        description="Fermionic Gaussian operator basis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, modes_default=2):
        p.add_argument("--input", help="input JSON file")
        p.add_argument("--output", help="report file (default stdout)")
        p.add_argument("--modes", type=int, default=modes_default,
                       help="mode count for seeded random inputs")
        p.add_argument("--seed", type=int, default=0, help="PCG64 seed")
        p.add_argument("--tolerance", type=float, default=1e-9)

    p = sub.add_parser("pfaffian", help="Pfaffian of an antisymmetric matrix")
    add_common(p)

    p = sub.add_parser("trace", help="trace of a Gaussian operator")
    add_common(p)

    p = sub.add_parser("moments", help="first moments, checked densely")
    add_common(p)

    p = sub.add_parser("materialize", help="dense normalised Gaussian")
    add_common(p)

    p = sub.add_parser("verify", help="run a theorem verification")
    add_common(p)
    p.add_argument("--theorem", required=True, choices=THEOREMS)
    p.add_argument("--count", type=int, default=1, help="number of seeds")
    p.set_defaults(tolerance=1e-6)

    p = sub.add_parser("decompose", help="positive Gaussian expansion")
    add_common(p)
    p.add_argument("--epsilon-schedule", default=",".join(str(e) for e in DEFAULT_EPSILONS),
                   help="comma-separated eps values for limit families")
    p.set_defaults(tolerance=1e-10)

    p = sub.add_parser("demo-bell", help="Bell projector as a single Gaussian")
    add_common(p)
    p.set_defaults(tolerance=1e-12)
    return parser


def _check(name: str, residual: float, tolerance: float) -> dict:
    residual = float(residual)
    return {
        "name": name,
        "residual": residual,
        "tolerance": float(tolerance),
        "passed": bool(residual <= tolerance),
    }


def _load_params(args) -> GaussianParams:
    if args.input:
        return io.decode_params(io.load_json(args.input))
    return random_gaussian_params(args.modes, args.seed)


def _config(args, **extra) -> dict:
    cfg = {
        "input": args.input,
        "modes": args.modes,
        "seed": args.seed,
        "tolerance": args.tolerance,
    }
    cfg.update(extra)
    return cfg


def _cmd_pfaffian(args):
    if not args.input:
        raise ValidationError("pfaffian needs --input with a matrix object")
    payload = io.load_json(args.input)
    if not isinstance(payload, dict) or "matrix" not in payload:
        raise ValidationError("input must contain a 'matrix' object")
    matrix = io.decode_matrix(payload["matrix"])
    value = linalg.pfaffian(matrix)
    det = linalg.det(matrix)
    resid = abs(value**2 - det) / max(abs(det), 1.0)
    checks = [_check("pfaffian-squared-vs-det", resid, max(args.tolerance, 1e-9))]
    results = {"pfaffian": io.encode_complex(value), "determinant": io.encode_complex(det)}
    return _config(args), results, checks


def _cmd_trace(args):
    params = _load_params(args)
    dense = complex(np.trace(materialize(params)))
    checks = [_check("trace-equals-omega", abs(dense - params.omega), args.tolerance)]
    results = {
        "params": io.encode_params(params),
        "omega": io.encode_complex(params.omega),
        "dense_trace": io.encode_complex(dense),
    }
    return _config(args), results, checks


def _cmd_moments(args):
    params = _load_params(args)
    n, m, mp = first_moments(params)
    checks = [_check("moments-vs-oracle", check_first_moments(params), args.tolerance)]
    results = {
        "params": io.encode_params(params),
        "n_moments": io.encode_matrix(n),
        "m_moments": io.encode_matrix(m),
        "mplus_moments": io.encode_matrix(mp),
    }
    return _config(args), results, checks


def _cmd_materialize(args):
    params = _load_params(args)
    dense = materialize(params)
    checks = [
        _check("trace-equals-omega",
               abs(complex(np.trace(dense)) - params.omega), args.tolerance)
    ]
    results = {"params": io.encode_params(params), "matrix": io.encode_matrix(dense)}
    return _config(args), results, checks


def _cmd_verify(args):
    reports = run_theorem(args.theorem, args.modes, args.seed,
                          count=args.count, tol=args.tolerance)
    checks = [
        _check(f"{r.identity}-seed-{r.seed}", r.residual, r.tolerance)
        for r in reports
    ]
    results = {"theorem": args.theorem, "runs": [r.to_dict() for r in reports]}
    return _config(args, theorem=args.theorem, count=args.count), results, checks


def _cmd_decompose(args):
    if not args.input:
        raise ValidationError("decompose needs --input with a density matrix")
    payload = io.load_json(args.input)
    if not isinstance(payload, dict) or "matrix" not in payload:
        raise ValidationError("input must contain a 'matrix' object")
    rho = io.decode_matrix(payload["matrix"])
    epsilons = tuple(float(x) for x in args.epsilon_schedule.split(","))
    decomp = decompose(rho, epsilons=epsilons)
    _, residual = reconstruct(decomp, rho)
    weights = decomp.weights
    min_weight = float(weights.min()) if weights.size else 0.0
    checks = [
        _check("reconstruction-residual", residual, args.tolerance),
        _check("negative-weight-magnitude", max(-min_weight, 0.0), 0.0),
    ]
    results = {
        "decomposition": io.encode_decomposition(decomp),
        "reconstruction_residual": residual,
        "min_weight": min_weight,
    }
    return _config(args, epsilon_schedule=list(epsilons)), results, checks


def _cmd_demo_bell(args):
    params = two_mode_params(1.0, 0.5 * np.eye(2), -0.5, -0.5)
    dense = materialize(params)
    psi = np.zeros(4)
    psi[0] = psi[3] = 1.0 / np.sqrt(2.0)
    target = np.outer(psi, psi)
    checks = [
        _check("bell-projector-residual", np.abs(dense - target).max(), args.tolerance)
    ]
    results = {"params": io.encode_params(params), "matrix": io.encode_matrix(dense)}
    return _config(args), results, checks


_COMMANDS = {
    "pfaffian": _cmd_pfaffian,
    "trace": _cmd_trace,
    "moments": _cmd_moments,
    "materialize": _cmd_materialize,
    "verify": _cmd_verify,
    "decompose": _cmd_decompose,
    "demo-bell": _cmd_demo_bell,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, results, checks = _COMMANDS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except FermiGaussError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERIC
    report = {
        "command": args.command,
        "config": config,
        "results": results,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
    text = io.dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report["passed"] else EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
