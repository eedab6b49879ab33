"""Command-line front end: ``shiftmax <subcommand> ...``.

Every subcommand reads JSON, calls into the library and writes JSON.
Validation problems and malformed input exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional

from . import config
from .brick import CSV_COLUMNS, ExperimentConfig, report_rows, run_experiment
from .certify import CONSERVATIVE, SHARP, AnalyticTail, FunctionWithTail, smallest_certifying_level
from .conditions import check_admissible, check_evanescent
from .debruijn import cycles_to_json
from .haar import HaarCoefficients, StepFunction, inverse_transform
from .optimize import ergodic_supremum
from .polytope import build_polytope
from .sequences import DEFAULT_SEQUENCE, GaugeSpec, SequenceSpec, parse_sequence


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj, path: Optional[str]) -> None:
    text = _dump(obj)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _field(obj, key: str, path: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"{path}: missing field {key!r}")
    return obj[key]


def _function(obj, path: str) -> StepFunction:
    """A step function given either by values or by Haar coefficients."""
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "values" in obj:
        _field(obj, "level", path)
        return StepFunction.from_json(obj)
    _field(obj, "mean", path)
    return inverse_transform(HaarCoefficients.from_json(obj))


def _sequence(value) -> SequenceSpec:
    if value is None:
        return DEFAULT_SEQUENCE
    return parse_sequence(value) if isinstance(value, str) else SequenceSpec.from_json(value)


def _level(n: int, cap: int) -> int:
    if not 1 <= n <= cap:
        raise InputError(f"--n must be in 1..{cap}, got {n}")
    return n


def cmd_graph(args) -> int:
    _emit(cycles_to_json(_level(args.n, config.CYCLE_CAP)), args.emit or args.out)
    return 0


def cmd_polytope(args) -> int:
    cap = config.FACE_CAP if args.faces else config.CYCLE_CAP
    _emit(build_polytope(_level(args.n, cap)).to_json(faces=args.faces), args.out)
    return 0


def cmd_optimize(args) -> int:
    f = _function(_load(args.function), args.function)
    _emit(ergodic_supremum(f).to_json(), args.out)
    return 0


def cmd_certify(args) -> int:
    head = _function(_load(args.head), args.head)
    gobj = _load(args.gauge) if args.gauge else {}
    gauge = GaugeSpec.from_json(gobj)
    a = _sequence(args.a if args.a is not None else gobj.get("sequence"))
    lip0 = Fraction(args.lip0)
    # exact Haar data below the head level, gauge bound from there on
    f = FunctionWithTail(head, AnalyticTail(a, gauge, lip0, start=head.level))
    top = min(args.max_level, head.level, config.CYCLE_CAP)
    cert = smallest_certifying_level(f, top, args.mode)
    if cert is None:
        _emit({"certified": False, "level": None, "reason": f"uncertified <= {top}"}, args.out)
    else:
        _emit(cert.to_json(), args.out)
    return 0


def _experiment_config(args) -> ExperimentConfig:
    obj = _load(args.config) if args.config else {}
    if not isinstance(obj, dict):
        raise InputError(f"{args.config}: expected a JSON object")
    f0 = obj.get("f0", "zero")
    if f0 != "zero":
        f0 = _function(f0, f"{args.config}: f0")
    samples = args.samples if args.samples is not None else obj.get("samples")
    if samples is None:
        raise InputError("sample count missing: pass --samples or set 'samples'")
    seed = args.seed if args.seed is not None else obj.get("seed", 0)
    return ExperimentConfig(
        a=_sequence(obj.get("sequence")),
        gauge=GaugeSpec.from_json(obj.get("gauge", {})),
        samples=int(samples),
        seed=int(seed),
        depth=obj.get("depth"),
        f0=None if f0 == "zero" else f0,
        mode=obj.get("mode", CONSERVATIVE),
    )


def cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    report = run_experiment(cfg, workers=args.workers)
    if args.out:
        _emit(report, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            w.writerows(report_rows(report))
    summary = {k: v for k, v in report.items() if k != "records"}
    sys.stdout.write(_dump(summary))
    return 0


def cmd_check_gauge(args) -> int:
    a = _sequence(args.a)
    gauge = GaugeSpec(rule=args.b, c_eva=Fraction(args.c_eva), c_adm=Fraction(args.c_adm),
                      c_lin=args.c_lin)
    eva = check_evanescent(a, gauge.c_eva, args.horizon)
    adm = check_admissible(gauge, a, args.horizon)
    print(f"evanescent: {str(eva.ok).lower()}, admissible: {str(adm.ok).lower()}")
    for name, res in (("evanescence", eva), ("admissibility", adm)):
        if not res.ok:
            print(f"{name} check failed at n={res.first_violation}: {res.reason}", file=sys.stderr)
    return 0 if eva.ok and adm.ok else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON output here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--csv", help="CSV output path (experiment only)")

    p = argparse.ArgumentParser(prog="shiftmax", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", parents=[common], help="simple cycles of G_n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--emit", help="output path")
    g.set_defaults(func=cmd_graph)

    q = sub.add_parser("polytope", parents=[common], help="vertices, edges and faces of R_n")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--faces", action="store_true", help=f"add the face census (n <= {config.FACE_CAP})")
    q.set_defaults(func=cmd_polytope)

    o = sub.add_parser("optimize", parents=[common], help="ergodic supremum of a step function")
    o.add_argument("--function", required=True, help="step function JSON")
    o.set_defaults(func=cmd_optimize)

    c = sub.add_parser("certify", parents=[common], help="gap-criterion certificate")
    c.add_argument("--head", required=True, help="step function JSON")
    c.add_argument("--gauge", help="gauge JSON bounding coefficients past the head")
    c.add_argument("--a", help="sequence (overrides the gauge file's 'sequence')")
    c.add_argument("--lip0", default="0", help="Lipschitz constant of the base function")
    c.add_argument("--max-level", type=int, default=config.CYCLE_CAP)
    c.add_argument("--mode", choices=(CONSERVATIVE, SHARP), default=CONSERVATIVE)
    c.set_defaults(func=cmd_certify)

    e = sub.add_parser("experiment", parents=[common], help="Monte Carlo locking experiment")
    e.add_argument("--config", help="experiment JSON")
    e.add_argument("--samples", type=int)
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_experiment)

    k = sub.add_parser("check-gauge", parents=[common], help="evanescence and admissibility")
    k.add_argument("--a", default="default")
    k.add_argument("--b", default="2^-n*a_n")
    k.add_argument("--horizon", type=int, default=8)
    k.add_argument("--c-eva", default="1")
    k.add_argument("--c-adm", default="1")
    k.add_argument("--c-lin", type=int, default=4)
    k.set_defaults(func=cmd_check_gauge)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"shiftmax {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
