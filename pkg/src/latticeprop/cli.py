"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 numeric overflow, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bargmann import bargmann_decompose, recombine
from .bench import DEVIATION_BOUND, report_to_dict, run_bench
from .config import ConfigError, dumps_json, fmt, load_config, row_to_dict, rows_to_csv, validate_output
from .crystal import StackConfig, band_scan, class_runs
from .sp2 import EPS_DET, DomainError, Mat2, OverflowGuardError, check_unimodular, parse_matrix, rel_diff
from .wigner import EPS_PARAB, Parabolic, chebyshev_power, class_parameter, wigner_decompose

EXIT_OK, EXIT_INPUT, EXIT_OVERFLOW, EXIT_VERIFY = 0, 2, 3, 4


class InputError(Exception):
    pass


class VerificationError(Exception):
    pass


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in r))
    return "\n".join(lines) + "\n"


def _matrix(args) -> Mat2:
    if not args.matrix:
        raise InputError("a matrix is required: four reals, row-major")
    try:
        return parse_matrix(args.matrix)
    except DomainError as exc:
        raise InputError(str(exc)) from None


def _check_det(m, eps_det):
    try:
        check_unimodular(m, eps_det)
    except DomainError:
        raise InputError(f"matrix is not unimodular: det = {m.det()!r}") from None


def cmd_decompose(args) -> str:
    m = _matrix(args)
    _check_det(m, args.eps_det)
    f = bargmann_decompose(m, args.eps_det)
    rc = recombine(f)
    dec = wigner_decompose(m, args.eps_det, args.eps_parab)
    w = dec.w_class
    wig = {
        "class": w.kind,
        "phi": class_parameter(w) if w.kind == "elliptic" else None,
        "chi": class_parameter(w) if w.kind == "hyperbolic" else None,
        "gamma": w.gamma if isinstance(w, Parabolic) else None,
        "orientation": w.orientation if isinstance(w, Parabolic) else None,
        "sign": dec.sign,
        "delta": dec.delta,
        "eta": dec.eta,
        "conjugator": list(dec.conjugator.entries()),
    }
    doc = {
        "command": "decompose",
        "matrix": list(m.entries()),
        "det": m.det(),
        "bargmann": {"theta1": f.theta1, "lambda": f.lam, "theta2": f.theta2},
        "recombination": {"theta": rc.theta, "delta": rc.delta},
        "wigner": wig,
    }
    if args.format == "json":
        return dumps_json(doc)
    header = ["theta1", "lambda", "theta2", "theta", "bargmann_delta",
              "class", "phi", "chi", "gamma", "orientation", "sign", "delta", "eta"]
    row = [f.theta1, f.lam, f.theta2, rc.theta, rc.delta, w.kind, wig["phi"], wig["chi"],
           wig["gamma"], wig["orientation"] or "", dec.sign, dec.delta, dec.eta]
    return _csv(header, [row])


def cmd_power(args) -> str:
    m = _matrix(args)
    _check_det(m, args.eps_det)
    n = args.N
    if n is None:
        raise InputError("--N is required for power")
    dec = wigner_decompose(m, args.eps_det, args.eps_parab)
    result = dec.power(n)
    deviation = None
    if args.verify:
        deviation = rel_diff(result, chebyshev_power(m, n))
    doc = {
        "command": "power",
        "matrix": list(m.entries()),
        "N": n,
        "class": dec.w_class.kind,
        "result": list(result.entries()),
        "deviation": deviation,
    }
    text = dumps_json(doc) if args.format == "json" else _csv(
        ["a11", "a12", "a21", "a22", "deviation"], [[*result.entries(), deviation]]
    )
    if deviation is not None and deviation > DEVIATION_BOUND:
        _emit(text, args.output)
        raise VerificationError(f"closed vs chebyshev deviation {deviation!r} > {DEVIATION_BOUND}")
    return text


def _spectrum(args, command: str) -> str:
    if not args.input:
        raise InputError("--input config path is required")
    config = load_config(args.input)
    periods = args.N if (command == "transmit" and args.N is not None) else config.periods
    rows = band_scan(config, periods, eps_det=args.eps_det, eps_parab=args.eps_parab)
    if args.format == "csv":
        return rows_to_csv(rows)
    doc = {
        "command": command,
        "kind": "stack" if isinstance(config, StackConfig) else "delta",
        "periods": periods,
        "rows": [row_to_dict(r) for r in rows],
    }
    if command == "bands":
        doc["runs"] = [{"class": c, "x_first": lo, "x_last": hi} for c, lo, hi in class_runs(rows)]
    return dumps_json(doc)


def cmd_transmit(args) -> str:
    return _spectrum(args, "transmit")


def cmd_bands(args) -> str:
    return _spectrum(args, "bands")


def _parse_n_list(text: str | None) -> list[int]:
    if not text:
        return []
    out = []
    for part in text.replace(",", " ").split():
        try:
            out.append(int(float(part)) if "e" in part.lower() else int(part))
        except ValueError:
            raise InputError(f"invalid N value {part!r}") from None
    return out


def cmd_bench(args) -> str:
    ns = _parse_n_list(args.N)
    if not ns:
        raise InputError("bench needs a non-empty --N list, e.g. --N 1000,1000000")
    if any(n < 0 or n > 10**9 for n in ns):
        raise InputError("bench N values must lie in [0, 1e9]")
    timings = not args.no_timings
    report = run_bench(ns, seed=args.seed, repeats=args.repeats, timings=timings)
    doc = report_to_dict(report, timings)
    if args.format == "json":
        text = dumps_json(doc)
    else:
        header = ["N", "naive_extrapolated", "rel_deviation"]
        if timings:
            header += ["closed_ns", "naive_ns"]
        text = _csv(header, [[r[h] if h != "naive_extrapolated" else str(r[h]).lower() for h in header]
                             for r in doc["rows"]])
    if not report.deviation_ok:
        _emit(text, args.output)
        raise VerificationError(
            f"max relative deviation {report.max_rel_deviation!r} exceeds {DEVIATION_BOUND}"
        )
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write results here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--eps-det", type=float, default=EPS_DET, help="unimodularity tolerance")
    common.add_argument("--eps-parab", type=float, default=EPS_PARAB, help="parabolic band half-width")

    p = argparse.ArgumentParser(prog="latticeprop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", parents=[common], help="Bargmann and little-group decomposition")
    d.add_argument("matrix", nargs="*", help="four reals, row-major")
    d.set_defaults(func=cmd_decompose)

    pw = sub.add_parser("power", parents=[common], help="closed-form N-th power")
    pw.add_argument("matrix", nargs="*", help="four reals, row-major")
    pw.add_argument("--N", type=int)
    pw.add_argument("--verify", action="store_true", help="compare with the chebyshev recurrence")
    pw.set_defaults(func=cmd_power)

    for name, func, text in (
        ("transmit", cmd_transmit, "N-period transmission spectrum"),
        ("bands", cmd_bands, "band/gap classification over the scan"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("-i", "--input", help="config json")
        s.add_argument("--N", type=int, help="override the configured period count")
        s.set_defaults(func=func)

    b = sub.add_parser("bench", parents=[common], help="closed form vs naive timing")
    b.add_argument("--N", help="comma-separated N values")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--no-timings", action="store_true", help="omit wall times (reproducible output)")
    b.set_defaults(func=cmd_bench)
    return p


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "N", None) is not None and isinstance(args.N, int) and args.N < 0:
        parser.error("--N must be non-negative")
    try:
        text = args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OverflowGuardError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        validate_output(json.loads(text))
    _emit(text, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
