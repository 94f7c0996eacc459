"""Command-line front end.

Exit status: 0 on success, 2 on usage errors (bad flags, unparsable numbers,
unsupported options), 1 when an input is outside a mathematical domain.
"""

from __future__ import annotations

import argparse
import csv
import enum
import json
import sys
from dataclasses import asdict, is_dataclass
from pathlib import Path

from monogamy_qkd import adversary, figures, security
from monogamy_qkd.errors import DomainError, UsageError
from monogamy_qkd.monogamy import MonogamyModel, Theory, load_curve_csv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(self, message)


class _ArgError(Exception):
    def __init__(self, parser, message):
        super().__init__(message)
        self.parser = parser


def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: _plain(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _model(args) -> MonogamyModel:
    theory = Theory(args.theory)
    if theory is Theory.CUSTOM:
        if not args.curve:
            raise UsageError("--theory custom requires --curve FILE")
        return load_curve_csv(args.curve)
    if args.curve:
        raise UsageError("--curve is only valid with --theory custom")
    return MonogamyModel.quantum() if theory is Theory.QUANTUM else MonogamyModel.nosignalling()


def _cmd_critical(args) -> dict:
    model = _model(args)
    res = security.critical_beta(model, args.tol)
    out = _plain(res)
    out["bracket"] = list(res.bracket)
    out["rounded"] = str(res.rounded(args.digits))
    out["tsirelson"] = security.tsirelson()
    out["below_tsirelson"] = res.beta_star < security.tsirelson()
    return out


def _cmd_check(args) -> dict:
    return _plain(security.check_condition(args.beta, _model(args)))


def _cmd_pointwise(args) -> dict:
    return _plain(security.check_pointwise(args.pb, args.pe))


def _cmd_counterexample(args) -> dict:
    return adversary.build_counterexample(args.pb, args.slack, args.alphabet).to_dict()


def _cmd_oracle(args) -> dict:
    res = adversary.minimize_conditional_entropy(args.pe, args.alphabet, args.grid, args.weight_steps)
    return {
        "min_value": res.min_value,
        "bound": 2.0 * (1.0 - args.pe),
        "argmin": res.argmin.to_dict(),
        "achieved_pe": res.achieved_pe,
        "band": res.band,
        "grid_steps": res.grid_steps,
        "weight_steps": res.weight_steps,
    }


def _cmd_strategy(args) -> dict:
    s = adversary.EveStrategy.from_json(Path(args.file).read_text())
    check = adversary.concavity_bound_check(s)
    return {
        "strategy": s.to_dict(),
        "p_e": adversary.guessing_probability(s),
        "i_ae": adversary.eve_information(s),
        "bound": _plain(check),
    }


def _cmd_bound(args) -> dict:
    return _plain(adversary.verify_concavity_bound(args.samples, args.max_alphabet, args.seed))


def _cmd_figure(args) -> dict:
    data = figures.sample_figure(args.points)
    writer = {"svg": figures.emit_svg, "csv": figures.emit_csv, "json": figures.emit_json}[args.format]
    path = writer(data, args.out)
    return {"out": str(path), "format": args.format, "points": len(data.samples)}


def _cmd_report(args) -> dict:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = figures.sample_figure(args.points)
    written = [
        figures.emit_csv(data, outdir / "curves.csv"),
        figures.emit_json(data, outdir / "figure.json"),
        figures.emit_svg(data, outdir / "figure.svg"),
    ]
    crit_path = outdir / "critical.csv"
    with crit_path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theory", "beta_star", "f_at_beta_star", "before_p", "iterations"])
        for key, model in (("qm", MonogamyModel.quantum()), ("ns", MonogamyModel.nosignalling())):
            res = security.critical_beta(model, args.tol)
            inter = data.intersections[key]
            w.writerow([key, format(res.beta_star, ".10g"), format(inter.f, ".10g"), str(inter.before_p).lower(), res.iterations])
    written.append(crit_path)
    return {"outdir": str(outdir), "files": [p.name for p in written]}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a single JSON document instead of key: value lines")

    parser = _Parser(prog="monoqkd", parents=[common],
                     description="Security thresholds for monogamy-based key distribution.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def theory_args(p):
        p.add_argument("--theory", required=True, choices=[t.value for t in Theory])
        p.add_argument("--curve", help="beta,f CSV table for --theory custom")

    p = sub.add_parser("critical", parents=[common], help="critical CHSH score for a theory")
    theory_args(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--digits", type=int, default=3, help="display precision for the rounded value")
    p.set_defaults(func=_cmd_critical)

    p = sub.add_parser("check", parents=[common], help="evaluate the condition at one beta")
    p.add_argument("--beta", type=float, required=True)
    theory_args(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("pointwise", parents=[common], help="h(P_B) < 2(1 - P_E) for given probabilities")
    p.add_argument("--pb", type=float, required=True)
    p.add_argument("--pe", type=float, required=True)
    p.set_defaults(func=_cmd_pointwise)

    p = sub.add_parser("counterexample", parents=[common], help="Eve with lower P_E but higher I(A:E)")
    p.add_argument("--pb", type=float, required=True)
    p.add_argument("--slack", type=float, default=0.5)
    p.add_argument("--alphabet", type=int, default=3)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("oracle", parents=[common], help="grid minimum of Eve's conditional entropy")
    p.add_argument("--pe", type=float, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--weight-steps", type=int, default=20)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("strategy", parents=[common], help="evaluate a strategy JSON file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_strategy)

    p = sub.add_parser("bound", parents=[common], help="random-sample check of the entropy bound")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--max-alphabet", type=int, default=8)
    p.add_argument("--seed", type=int, default=adversary.DEFAULT_SEED)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("figure", parents=[common], help="write the monogamy figure data")
    p.add_argument("--out", required=True)
    p.add_argument("--format", required=True, choices=["svg", "csv", "json"])
    p.add_argument("--points", type=int, default=201)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("report", parents=[common], help="write CSV, JSON and SVG outputs to a directory")
    p.add_argument("--outdir", required=True)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_report)
    return parser


def _print_human(result: dict, prefix: str = "") -> None:
    for key, value in result.items():
        if isinstance(value, dict):
            _print_human(value, f"{prefix}{key}.")
        else:
            print(f"{prefix}{key}: {value}")


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgError as exc:
        exc.parser.print_usage(sys.stderr)
        print(f"{exc.parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "json", False):
        print(json.dumps(result, sort_keys=True))
    else:
        _print_human(result)
    return 0


def main() -> None:
    sys.exit(run_cli())
