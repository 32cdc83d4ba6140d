"""
Command-line interface.

``hommeas measure`` builds a measurement for one operator and writes a
JSON report; ``hommeas compare`` puts the ancilla counts of several
schemes side by side; ``hommeas stats`` evaluates the Agresti-Coull
interval. Codes come from files (see :mod:`hommeas.fileio`) or from the
shipped benchmarks via ``builtin:NAME``. Operators use 1-based qubit
numbers, for example ``"X1 X2 X3"``.

Exit codes: 0 success, 2 unreadable input, 3 operator is not a logical,
4 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from pathlib import Path

from . import __version__, codelib, css, surgery
from .css import CssCode, DistanceCapExceeded, PauliOperator
from .fileio import ParseError, format_operator, parse_operator, read_code, sha256_file
from .hypergraph import DEFAULT_CHEEGER_CAP, CheegerCapExceeded
from .protocol import run_protocol

__all__ = ["agresti_coull", "build_parser", "main"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_LOGICAL = 3
EXIT_CAP = 4


def agresti_coull(n_fail: int, n_tot: int, kappa: float = 1.96) -> tuple[float, float]:
    """Agresti-Coull estimate of a failure probability and its half-width.

    ``p = (n_fail + kappa^2 / 2) / (n_tot + kappa^2)`` and the half-width
    is ``kappa * sqrt(p (1 - p) / (n_tot + kappa^2))``.

    Raises
    ------
    ValueError
        Unless ``0 <= n_fail <= n_tot``, ``n_tot > 0`` and ``kappa >= 0``.
    """
    if n_tot <= 0 or not 0 <= n_fail <= n_tot:
        raise ValueError("need 0 <= n_fail <= n_tot and n_tot > 0")
    if kappa < 0 or not math.isfinite(kappa):
        raise ValueError("kappa must be a finite non-negative number")
    k2 = kappa * kappa
    p = (n_fail + k2 / 2) / (n_tot + k2)
    return p, kappa * math.sqrt(p * (1 - p) / (n_tot + k2))


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_code(source: str, hz: str | None) -> tuple[CssCode, dict]:
    if source.lower().startswith("builtin:"):
        name = source.split(":", 1)[1]
        try:
            return codelib.benchmark_code(name), {"builtin": name.upper()}
        except KeyError as exc:
            raise _CliError(EXIT_PARSE, str(exc)) from None
    try:
        code = read_code(source, hz)
    except (OSError, ParseError) as exc:
        raise _CliError(EXIT_PARSE, f"cannot read code: {exc}") from None
    info = {"file": source, "sha256": sha256_file(source)}
    if hz:
        info.update(hz_file=hz, hz_sha256=sha256_file(hz))
    return code, info


def _load_operator(args, code: CssCode) -> PauliOperator:
    text = args.op
    if text is None:
        if args.code.lower().startswith("builtin:"):
            text = codelib.benchmark_operator_string(args.code.split(":", 1)[1])
        else:
            raise _CliError(EXIT_PARSE, "an operator string (--op) is required")
    try:
        op = parse_operator(text, code.n)
    except ParseError as exc:
        raise _CliError(EXIT_PARSE, f"bad operator: {exc}") from None
    kind = "X" if op.is_x_type else "Z" if op.is_z_type else "Y"
    want = args.sector.upper()
    if want != "AUTO" and kind != want:
        raise _CliError(EXIT_PARSE, f"--sector {args.sector} given but the operator is of type {kind}")
    return op


def _options(args) -> surgery.MeasurementOptions:
    return surgery.MeasurementOptions(
        seed=args.seed, samples=args.samples, cellulation=not args.no_cellulation,
        max_cycle_weight=args.max_cycle_weight, max_degree=args.max_degree,
        cheeger_cap=args.cheeger_cap,
    )


def _distance(code, args) -> int | float | None:
    """Smallest upper bound over both sectors, or the exact value when small enough."""
    if not isinstance(code, CssCode) or args.trials <= 0:
        return None
    if args.exact_distance:
        vals = [css.exact_distance(code, s, cap=args.distance_cap) for s in "XZ"]
    else:
        vals = [css.distance_search(code, s, args.trials, args.seed, workers=args.workers).bound
                for s in "XZ"]
    d = min(vals)
    return None if d == css.INFINITE else int(d)


def _code_block(code, d) -> dict:
    prof = css.weight_profile(code)
    return {
        "n": int(code.n), "k": int(code.k), "d_upper": d,
        "q_X": prof.q_x, "w_X": prof.w_x, "q_Z": prof.q_z, "w_Z": prof.w_z,
        "q": prof.q, "w": prof.w,
        "averages": {
            "q_X": round(prof.q_x_avg, 4), "w_X": round(prof.w_x_avg, 4),
            "q_Z": round(prof.q_z_avg, 4), "w_Z": round(prof.w_z_avg, 4),
            "q": round(prof.q_avg, 4), "w": round(prof.w_avg, 4),
        },
    }


def _build(args, code, op) -> surgery.MeasurementArtifact:
    if args.scheme == "gls":
        r = args.r if args.r is not None else (args.distance or op.weight)
        return surgery.scheme_generalized_lattice_surgery(code, op, r)
    if args.scheme == "cylinder":
        return surgery.scheme_cylinder(code, op)
    if op.is_x_type or op.is_z_type:
        return surgery.algorithm3_measure(code, op, _options(args))
    return surgery.mixed_measure(code, op, _options(args))


def _measure_report(args) -> dict:
    code, source = _load_code(args.code, args.hz)
    op = _load_operator(args, code)
    art = _build(args, code, op)
    report = {
        "version": __version__,
        "source": source,
        "operator": format_operator(op),
        "scheme": art.scheme,
        "sector": art.sector,
        "input": _code_block(code, _distance(code, args)),
        "merged": _code_block(art.merged, _distance(art.merged, args)),
        "n_anc": int(art.ancilla_count),
        "cheeger_trace": [str(h) for h in art.cheeger_trace],
        "added_edges": [list(e) for e in art.added_edges],
        "chords": [list(e) for e in art.chords],
        "flags": sorted(art.flags),
        "sign": art.sign,
        "row_provenance": dict(Counter(art.row_provenance)),
        "seed": args.seed,
        "workers": args.workers,
        "samples": args.samples,
        "trials": args.trials,
    }
    if art.is_css:
        counts = art.counts()
        report["gauges"] = int(counts.r)
    if args.rounds and art.is_css and art.scheme == "eehm":
        runs = [run_protocol(art, ev, args.rounds, seed=args.seed + i)
                for i, ev in enumerate((1, -1))]
        report["protocol"] = {
            "rounds": args.rounds,
            "inferred": [r.inferred for r in runs],
            "prepared": [r.prepared for r in runs],
            "success": all(r.success for r in runs),
        }
    return report


def _compare_report(args) -> dict:
    code, source = _load_code(args.code, args.hz)
    op = _load_operator(args, code)
    if not (op.is_x_type or op.is_z_type):
        raise _CliError(EXIT_PARSE, "compare needs a pure X or pure Z operator")
    d = args.distance
    if d is None:
        sector = "X" if op.is_x_type else "Z"
        vec = op.x if sector == "X" else op.z
        if not css.is_logical(code, vec, sector):
            raise surgery.NotALogicalError("the operator is not a nontrivial logical of the code")
        found = css.distance_search(code, sector, max(args.trials, 1), args.seed,
                                    workers=args.workers).bound
        d = int(found) if found != css.INFINITE else op.weight
    gls = surgery.scheme_generalized_lattice_surgery(code, op, d)
    reduced = (surgery.scheme_generalized_lattice_surgery(code, op, args.r).ancilla_count
               if args.r is not None else None)
    eehm = surgery.algorithm3_measure(code, op, _options(args))
    return {
        "source": source, "operator": format_operator(op), "d": d,
        "n_anc": {"gls_r_d": gls.ancilla_count, "gls_r": reduced, "r": args.r,
                  "eehm": eehm.ancilla_count},
        "seed": args.seed, "workers": args.workers,
    }


def _format_compare(rep: dict) -> str:
    c = rep["n_anc"]
    mid = "unavailable (pass --r)" if c["gls_r"] is None else f"{c['gls_r']} (r={c['r']})"
    return "\n".join([
        f"operator      {rep['operator']}",
        f"d             {rep['d']}",
        f"gls, r=d      {c['gls_r_d']}",
        f"gls, chosen r {mid}",
        f"this scheme   {c['eehm']}",
    ])


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("code", help="code file (JSON or X-check matrix) or builtin:NAME")
    p.add_argument("--hz", help="Z-check matrix file when CODE is an X-check matrix")
    p.add_argument("--op", help='operator such as "X1 X2 X3" (1-based qubits)')
    p.add_argument("--sector", choices=["x", "z", "auto"], default="auto",
                   help="require the operator to be of this type")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="streams for the distance search")
    p.add_argument("--samples", type=int, default=surgery.DEFAULT_SAMPLES,
                   help="random candidates in the cycle-basis search")
    p.add_argument("--trials", type=int, default=1000,
                   help="randomized distance trials per sector (0 skips the distance)")
    p.add_argument("--exact-distance", action="store_true", help="enumerate instead of sampling")
    p.add_argument("--distance-cap", type=int, default=26,
                   help="largest kernel dimension for exact enumeration")
    p.add_argument("--cheeger-cap", type=int, default=DEFAULT_CHEEGER_CAP,
                   help="largest graph for exact Cheeger constants")
    p.add_argument("--no-cellulation", action="store_true")
    p.add_argument("--max-cycle-weight", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--r", type=int, help="layer count for generalized lattice surgery")
    p.add_argument("--distance", type=int, help="code distance to use instead of searching")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hommeas", description="Measure logical operators of CSS codes with small ancilla systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="build a measurement and report the merged code")
    _add_common(m)
    m.add_argument("--scheme", choices=["eehm", "gls", "cylinder"], default="eehm")
    m.add_argument("--rounds", type=int, default=0,
                   help="also simulate the protocol with this many repetitions")

    c = sub.add_parser("compare", help="ancilla counts of several schemes")
    _add_common(c)
    c.add_argument("--json", action="store_true", help="print JSON instead of a table")

    s = sub.add_parser("stats", help="Agresti-Coull interval for a failure count")
    s.add_argument("n_fail", type=int)
    s.add_argument("n_tot", type=int)
    s.add_argument("--kappa", type=float, default=1.96)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.command == "stats":
            p, hw = agresti_coull(args.n_fail, args.n_tot, args.kappa)
            print(json.dumps({"p_fail": p, "half_width": hw}))
            return EXIT_OK
        if args.command == "measure":
            _emit(json.dumps(_measure_report(args), indent=2), args.output)
        else:
            rep = _compare_report(args)
            _emit(json.dumps(rep, indent=2) if args.json else _format_compare(rep), args.output)
        return EXIT_OK
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except surgery.NotALogicalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_LOGICAL
    except (CheegerCapExceeded, DistanceCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
