"""Command-line front end.

    nbody-galois analyze --masses 1,1,1 --h -0.375 --c 1 [--format md]
    nbody-galois central-config --masses 1,2,3
    nbody-galois spectrum --masses 1,2,3,4
    nbody-galois verify [--only gauge] [--perturb-hessian 1e-3]

Exit codes: 0 success, 1 input error, 2 inconclusive verdict, 3 invariant
failure.  Bodies in ``--ordering`` are numbered from 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import __version__, report
from .central_config import ConfigurationError, MassSystem, SpectrumError, build_cmatrix, solve_moulton, spectrum
from .exactmath import to_fraction
from .kovacic import AnalysisOptions, InvariantError, analyze_system
from .numerics import ConvergenceError
from .variational.scalar import ConstructionError
from .verify import SUITES, Instance, run_suites

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2
EXIT_INVARIANT = 3

log = logging.getLogger("nbody_galois")


class InputError(ValueError):
    pass


def _parse_list(text, conv, what):
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [t for t in str(text).replace(" ", "").split(",") if t]
    try:
        return [conv(t) for t in items]
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"cannot parse {what}: {text!r}") from None


def _parse_level(text, what) -> Fraction:
    try:
        # decimal strings are read exactly: -0.375 becomes -3/8
        return to_fraction(Fraction(str(text)))
    except (ValueError, TypeError, ZeroDivisionError):
        raise InputError(f"cannot parse {what}: {text!r}") from None


def _ordering(raw, n):
    if raw is None:
        return None
    ordering = _parse_list(raw, int, "ordering")
    if sorted(ordering) != list(range(1, n + 1)):
        raise InputError(f"ordering must be a permutation of 1..{n}")
    return [k - 1 for k in ordering]


def _request(args, defaults: dict) -> dict:
    """Merge ``--input`` file values with explicit flags (flags win)."""
    req = dict(defaults)
    if getattr(args, "input", None):
        try:
            with open(args.input, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read input file: {exc}") from None
        if not isinstance(data, dict):
            raise InputError("input file must hold a JSON object")
        unknown = set(data) - {"masses", "ordering", "h", "c", "precision", "output_format", "format", "seed"}
        if unknown:
            raise InputError(f"unknown request fields: {', '.join(sorted(unknown))}")
        if "output_format" in data:
            data["format"] = data.pop("output_format")
        req.update(data)
    for key in ("masses", "ordering", "h", "c", "precision", "format", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            req[key] = val
    if req.get("masses") is None:
        raise InputError("masses are required")
    req["masses"] = _parse_list(req["masses"], float, "masses")
    if req.get("format") == "markdown":
        req["format"] = "md"
    if req.get("format", "json") not in ("json", "md"):
        raise InputError("format must be json or md")
    return req


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_analyze(args) -> int:
    req = _request(args, {"format": "json", "precision": 128, "seed": 0})
    for key in ("h", "c"):
        if req.get(key) is None:
            raise InputError(f"--{key} is required")
    h = _parse_level(req["h"], "h")
    c = _parse_level(req["c"], "c")
    masses = req["masses"]
    if len(masses) < 3:
        raise InputError("analyze needs at least three bodies")
    ordering = _ordering(req.get("ordering"), len(masses))
    precision = int(req["precision"])
    if precision < 53:
        raise InputError("precision must be at least 53 bits")
    opts = AnalysisOptions(precision=precision, timings=bool(args.timings))
    log.info("analyzing masses=%s h=%s c=%s", masses, h, c)
    rep = analyze_system(masses, h, c, ordering, opts)
    d = report.analysis_dict(rep)
    _emit(report.to_json(d) if req["format"] == "json" else report.analysis_markdown(d))
    log.info("overall: %s", rep.overall)
    return EXIT_INCONCLUSIVE if rep.any_inconclusive else EXIT_OK


def _config_command(args, command: str) -> int:
    req = _request(args, {"format": "json"})
    ms = MassSystem(req["masses"])
    ordering = _ordering(req.get("ordering"), ms.n)
    config = solve_moulton(ms, ordering)
    spec = spectrum(build_cmatrix(config), ms)
    d = report.config_report(config, spec, command)
    _emit(report.to_json(d) if req["format"] == "json" else report.config_markdown(d))
    return EXIT_OK


def cmd_central_config(args) -> int:
    return _config_command(args, "central-config")


def cmd_spectrum(args) -> int:
    return _config_command(args, "spectrum")


def cmd_verify(args) -> int:
    req = _request(args, {"masses": [1.0, 1.0, 1.0], "h": "-3/8", "c": "1", "format": "json", "seed": 0})
    only = None
    if args.only:
        only = [s for item in args.only for s in item.split(",") if s]
        for s in only:
            if s not in SUITES:
                raise InputError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
    masses = req["masses"]
    if len(masses) < 3:
        raise InputError("verify needs at least three bodies")
    inst = Instance(
        masses,
        _parse_level(req["h"], "h"),
        _parse_level(req["c"], "c"),
        _ordering(req.get("ordering"), len(masses)),
        int(req["seed"]),
        float(args.perturb_hessian or 0.0),
    )
    results = run_suites(inst, only)
    instance = {
        "masses": masses,
        "h": str(inst.h),
        "c": str(inst.c),
        "seed": inst.seed,
        "perturb_hessian": inst.perturb_hessian,
        "suites": list(only or SUITES),
    }
    d = report.verify_report(results, instance)
    _emit(report.to_json(d) if req["format"] == "json" else report.verify_markdown(d))
    failed = [r for r in results if not r.passed]
    if failed:
        f = failed[0]
        print(f"invariant failed: {f.suite}: {f.name} ({f.value:.3e} >= {f.tol:.0e})", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--masses", help="comma-separated positive masses, e.g. 1,1,1")
    p.add_argument("--ordering", help="left-to-right body order, 1-based, e.g. 2,1,3")
    p.add_argument("--input", help="JSON file with request fields (flags override it)")
    p.add_argument("--format", choices=("json", "md"), default=None, help="output format (default json)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbody-galois",
        description="Differential Galois obstructions to integrability of the planar n-body problem "
                    "on fixed energy and angular momentum levels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the full obstruction pipeline")
    _common(pa)
    pa.add_argument("--h", help="Kepler energy level (decimal or fraction)")
    pa.add_argument("--c", help="Kepler angular momentum level (decimal or fraction)")
    pa.add_argument("--precision", type=int, help="bits for printed exponent enclosures (default 128)")
    pa.add_argument("--seed", type=int, help="accepted for request compatibility; analysis is deterministic")
    pa.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("central-config", help="collinear central configuration")
    _common(pc)
    pc.set_defaults(func=cmd_central_config)

    ps = sub.add_parser("spectrum", help="spectrum of the C-matrix and the delta parameters")
    _common(ps)
    ps.set_defaults(func=cmd_spectrum)

    pv = sub.add_parser("verify", help="numerical invariant suite")
    _common(pv)
    pv.add_argument("--h", help="energy level (default -3/8)")
    pv.add_argument("--c", help="angular momentum level (default 1)")
    pv.add_argument("--seed", type=int, help="seed for sampled anomalies and variations (default 0)")
    pv.add_argument("--only", action="append", help=f"run only these suites ({', '.join(SUITES)})")
    pv.add_argument("--perturb-hessian", type=float, default=0.0, help="add a perturbation of this size to the Hessian")
    pv.set_defaults(func=cmd_verify)
    return parser


def _glue_levels(argv: list[str]) -> list[str]:
    # "--h -1/2" would otherwise be read as an option by argparse
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--h", "--c"):
            v = next(it, None)
            out.append(a if v is None else f"{a}={v}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_levels(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (InputError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, ConstructionError, SpectrumError) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
