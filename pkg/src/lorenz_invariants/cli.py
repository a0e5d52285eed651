"""Command-line interface: ``lorenz <command> ...``.

Exit codes: 0 success (and Expansive for ``check``), 2 Rotational, 3 Invalid,
64 unparseable input or bad usage, 65 input outside an operation's domain,
73 output file cannot be written.

Every option can also be set through an environment variable named
``LORENZ_<OPTION>``, e.g. ``LORENZ_DEPTH=8192``.  Flags win over the environment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional

import numpy as np

from .classify import Region, classify_cells, distance, invariant_sequence
from .errors import DomainError, LorenzError, ParseError, UnsupportedError
from .kneading import DEFAULT_DEPTH, DEFAULT_WINDOW, KneadingInvariant, Verdict, parse_invariant, validate
from .param import DEFAULT_TOL, alpha_from_kplus, solve_beta, spectral_radius, transition_matrix
from .renorm import DEFAULT_MAX_STEPS, factorize

EXIT_OK = 0
EXIT_ROTATIONAL = 2
EXIT_INVALID = 3
EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_CANTCREAT = 73

ENV_PREFIX = "LORENZ_"

# gray level per sweep class in PGM output
PGM_LEVELS = {
    "rotation": 0,
    "prime_periodic": 64,
    "prime_expansive": 128,
    "renormalizable": 192,
    "undetected": 224,
    "ambiguous": 240,
    "outside": 255,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}")


def _flag(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=_env("json", False, _flag),
                        help="machine-readable output")
    common.add_argument("--tol", type=float, default=_env("tol", DEFAULT_TOL, float),
                        help="root-finding tolerance (default %(default)g)")
    common.add_argument("--depth", type=int, default=_env("depth", DEFAULT_DEPTH, int),
                        help="itinerary depth (default %(default)d)")
    common.add_argument("--window", type=int, default=_env("window", DEFAULT_WINDOW, int),
                        help="period detection window (default %(default)d)")
    common.add_argument("--max-steps", type=int, default=_env("max_steps", DEFAULT_MAX_STEPS, int),
                        help="renormalization budget (default %(default)d)")

    parser = _Parser(prog="lorenz", description="Kneading invariants of expansive Lorenz maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in [("check", "admissibility verdict"), ("factor", "renormalization factorization"),
                       ("params", "(beta, alpha) and the invariant sequence"),
                       ("matrix", "transition matrix of a periodic invariant")]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("invariant", help='kneading invariant, e.g. "(10) (011)"')

    p = sub.add_parser("dist", parents=[common], help="distance between two maps")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("sweep", parents=[common], help="classify a grid of the parameter triangle")
    p.add_argument("--beta", nargs=2, type=float, metavar=("LO", "HI"),
                   default=_env("beta", [1.05, 1.95], _floats))
    p.add_argument("--alpha", nargs=2, type=float, metavar=("LO", "HI"),
                   default=_env("alpha", [0.0, 1.0], _floats))
    p.add_argument("--alpha-mode", choices=("fraction", "absolute"),
                   default=_env("alpha_mode", "fraction"),
                   help="alpha as a fraction of [0, 2-beta] or as absolute values")
    p.add_argument("--grid", nargs=2, type=int, metavar=("NBETA", "NALPHA"),
                   default=_env("grid", [50, 50], _ints))
    p.add_argument("--format", choices=("csv", "pgm"), default=_env("format", None))
    p.add_argument("--workers", type=int, default=_env("workers", 1, int))
    p.add_argument("-o", "--out", required=True, help="output path ('-' for stdout, csv only)")
    return parser


def _floats(raw: str):
    return [float(x) for x in raw.replace(",", " ").split()]


def _ints(raw: str):
    return [int(x) for x in raw.replace(",", " ").split()]


# ------------------------------------------------------------------ helpers

def _num(x):
    if isinstance(x, Fraction):
        return str(x)
    return x


def _point_json(pt) -> dict:
    return {"beta": _num(pt.beta), "alpha": _num(pt.alpha), "region": str(pt.region)}


def _fmt(x) -> str:
    if isinstance(x, Fraction) or isinstance(x, int):
        return str(x)
    return f"{x:.6f}"


def _maybe_params(K: KneadingInvariant, tol: float):
    if validate(K).verdict is not Verdict.EXPANSIVE:
        return None
    beta = solve_beta(K, tol)
    return beta, alpha_from_kplus(K, beta)


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(lines))


# ------------------------------------------------------------------ commands

def cmd_check(args) -> int:
    K = parse_invariant(args.invariant)
    adm = validate(K)
    if adm.verdict is Verdict.EXPANSIVE:
        line = "Expansive"
    elif adm.verdict is Verdict.ROTATIONAL:
        line = f"Rotational ({adm.witness})"
    else:
        line = f"Invalid: {adm.witness}"
    _emit(args, {"kplus": str(K.kplus), "kminus": str(K.kminus), "verdict": str(adm.verdict),
                 "witness": str(adm.witness) if adm.witness else None}, [line])
    return {Verdict.EXPANSIVE: EXIT_OK, Verdict.ROTATIONAL: EXIT_ROTATIONAL,
            Verdict.INVALID: EXIT_INVALID}[adm.verdict]


def cmd_factor(args) -> int:
    K = parse_invariant(args.invariant)
    if validate(K).verdict is Verdict.INVALID:
        raise DomainError(f"inadmissible kneading invariant: {validate(K).witness}")
    fac = factorize(K, args.max_steps)
    steps, lines = [], []
    for i, W in enumerate(fac.steps, 1):
        if W.is_periodic:
            beta, alpha = 1, W.rotation_number
        else:
            beta, alpha = _maybe_params(W.as_invariant(), args.tol) or (None, None)
        steps.append({"wplus": W.wplus, "wminus": W.wminus, "kind": str(W.kind),
                      "beta": _num(beta), "alpha": _num(alpha)})
        pair = f"({_fmt(beta)}, {_fmt(alpha)})" if beta is not None else "(-)"
        lines.append(f"step {i}: {W} {W.kind} {pair}")
    term = _maybe_params(fac.terminal, args.tol)
    if not fac.steps:
        lines.append("prime")
    tail = f" ({_fmt(term[0])}, {_fmt(term[1])})" if term else ""
    lines.append(f"terminal: {fac.terminal}{tail}")
    if fac.truncated:
        lines.append(f"truncated after {fac.depth} steps")
    _emit(args, {"kplus": str(K.kplus), "kminus": str(K.kminus), "verdict": str(validate(K).verdict),
                 "steps": steps, "terminal": str(fac.terminal),
                 "beta": term[0] if term else None, "alpha": term[1] if term else None,
                 "truncated": fac.truncated}, lines)
    return EXIT_OK


def cmd_params(args) -> int:
    K = parse_invariant(args.invariant)
    beta = solve_beta(K, args.tol)
    alpha = alpha_from_kplus(K, beta)
    seq = invariant_sequence(K, args.max_steps, args.tol)
    lines = [f"beta = {beta:.10f}", f"alpha = {alpha:.10f}", f"entropy = {math.log(beta):.10f}",
             "sequence:"]
    lines += [f"  {pt}" for pt in seq]
    if seq.truncated:
        lines.append("  (truncated)")
    _emit(args, {"kplus": str(K.kplus), "kminus": str(K.kminus), "verdict": "Expansive",
                 "beta": beta, "alpha": alpha, "entropy": math.log(beta),
                 "sequence": [_point_json(pt) for pt in seq], "truncated": seq.truncated}, lines)
    return EXIT_OK


def cmd_dist(args) -> int:
    K1 = parse_invariant(args.first)
    K2 = parse_invariant(args.second)
    d = distance(K1, K2, args.max_steps)
    inf = lambda n: "inf" if n is None else n  # noqa: E731
    _emit(args, {"distance": d.value, "p": inf(d.p), "splus": inf(d.splus), "sminus": inf(d.sminus)},
          [repr(d.value), f"p = {inf(d.p)}, s+ = {inf(d.splus)}, s- = {inf(d.sminus)}"])
    return EXIT_OK


def cmd_matrix(args) -> int:
    K = parse_invariant(args.invariant)
    M = transition_matrix(K)
    rho = spectral_radius(M, args.tol)
    beta = solve_beta(K, args.tol)
    lines = [" ".join(str(v) for v in row) for row in M.tolist()]
    lines += [f"spectral radius = {rho:.10f}", f"beta = {beta:.10f}"]
    _emit(args, {"kplus": str(K.kplus), "kminus": str(K.kminus), "matrix": M.tolist(),
                 "states": list(M.labels), "spectral_radius": rho, "beta": beta}, lines)
    return EXIT_OK


def sweep_cells(beta_range, alpha_range, alpha_mode: str, grid):
    """Row-major cells ``(beta, alpha, inside)``; rows follow beta."""
    nb, na = grid
    if nb < 1 or na < 1:
        raise DomainError("grid counts must be positive")
    lo, hi = beta_range
    if not (1.0 <= lo <= hi <= 2.0):
        raise DomainError(f"beta range {beta_range} not inside [1, 2]")
    cells = []
    for b in np.linspace(lo, hi, nb):
        b = float(b)
        for a in np.linspace(alpha_range[0], alpha_range[1], na):
            a = float(a)
            if alpha_mode == "fraction":
                if not 0.0 <= a <= 1.0:
                    raise DomainError(f"alpha fraction {a} outside [0, 1]")
                cells.append((b, min(a * (2.0 - b), 2.0 - b), True))
            else:
                cells.append((b, a, 0.0 <= a <= 2.0 - b))
    return cells


def _classify_chunk(job):
    betas, alphas, depth, window, max_steps = job
    return [(str(r.region), r.m, r.detail) for r in classify_cells(betas, alphas, depth, window,
                                                                    max_steps=max_steps)]


def run_sweep(cells, depth: int, window: int, max_steps: int, workers: int = 1):
    """Classify cells; output order is cell order whatever the worker count."""
    inside = [c for c in cells if c[2]]
    chunk = max(1, -(-len(inside) // max(1, workers * 4)))
    jobs = [([c[0] for c in inside[i:i + chunk]], [c[1] for c in inside[i:i + chunk]], depth, window, max_steps)
            for i in range(0, len(inside), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_classify_chunk, jobs))
    else:
        parts = [_classify_chunk(j) for j in jobs]
    found = iter([r for part in parts for r in part])
    return [next(found) if c[2] else ("outside", 0, "") for c in cells]


def _cell_detail(cls: str, m: int, detail: str) -> str:
    if cls == "renormalizable":
        return f"m={m} {detail}".strip()
    return detail


def render_csv(cells, results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "alpha", "class", "detail"])
    for (b, a, inside), (cls, m, detail) in zip(cells, results):
        if inside:
            w.writerow([repr(b), repr(a), cls, _cell_detail(cls, m, detail)])
    return buf.getvalue()


def render_pgm(results, grid) -> bytes:
    nb, na = grid
    header = f"P5\n{na} {nb}\n255\n".encode("ascii")
    return header + bytes(PGM_LEVELS[cls] for cls, _, _ in results)


def cmd_sweep(args) -> int:
    fmt = args.format or ("pgm" if args.out.endswith(".pgm") else "csv")
    cells = sweep_cells(args.beta, args.alpha, args.alpha_mode, args.grid)
    results = run_sweep(cells, args.depth, args.window, args.max_steps, args.workers)
    payload = render_pgm(results, args.grid) if fmt == "pgm" else render_csv(cells, results).encode()
    if args.out == "-":
        if fmt == "pgm":
            raise DomainError("pgm output needs a file path")
        sys.stdout.write(payload.decode())
    else:
        try:
            with open(args.out, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_CANTCREAT
    counts: dict[str, int] = {}
    for cls, _, _ in results:
        counts[cls] = counts.get(cls, 0) + 1
    if args.out != "-":
        _emit(args, {"out": args.out, "format": fmt, "counts": counts},
              [f"{k}: {v}" for k, v in sorted(counts.items())])
    return EXIT_OK


COMMANDS = {"check": cmd_check, "factor": cmd_factor, "params": cmd_params,
            "dist": cmd_dist, "matrix": cmd_matrix, "sweep": cmd_sweep}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, UnsupportedError, LorenzError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
