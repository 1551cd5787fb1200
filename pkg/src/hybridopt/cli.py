"""Command-line front end."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .contractor import constraint_system, point_values
from .coop.messages import Status
from .coop.orchestrate import MODES, RunResult, SolverConfig, orchestrate
from .expr import ModelError, Problem, format_expr, parse_problem
from .interval import Interval

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNCERTIFIED = 3

ACTIVITY_THRESHOLD = 1e-4

_BISECT = {"rr": "round_robin", "largest": "largest_first", "smear": "smear"}


def bundled_models() -> list[str]:
    root = resources.files("hybridopt") / "models"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".mod"))


def load_model_text(source: str) -> str:
    """Read a model from a path, or by name from the bundled models."""
    path = Path(source)
    if path.is_file():
        return path.read_text()
    name = source[:-4] if source.endswith(".mod") else source
    if name in bundled_models():
        return (resources.files("hybridopt") / "models" / f"{name}.mod").read_text()
    raise FileNotFoundError(f"no model file or bundled model named {source!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hybridopt",
        description="Certified global minimization of a model file.")
    p.add_argument("model", help="model file path or bundled model name "
                                 f"({', '.join(bundled_models())})")
    p.add_argument("--eps", type=float, default=1e-8, help="objective precision")
    p.add_argument("--eps-eq", type=float, default=1e-8, help="equality tolerance")
    p.add_argument("--np", type=int, default=20, help="DE population size")
    p.add_argument("--w", type=float, default=0.7, help="DE amplitude factor")
    p.add_argument("--cr", type=float, default=0.9, help="DE crossover rate")
    p.add_argument("--eta", type=float, default=0.0, help="quasi-fixed-point ratio")
    p.add_argument("--bisect", choices=sorted(_BISECT), default="smear")
    p.add_argument("--queue", choices=["maxdist", "best", "largest", "depth"],
                   default=None, help="box extraction order (default: maxdist in hybrid "
                                      "mode, best otherwise)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="hybrid")
    p.add_argument("--reduction-period", type=int, default=10,
                   help="DE generations between domain reductions")
    p.add_argument("--max-time", type=float, default=None, help="wall-clock cap in seconds")
    p.add_argument("--max-iters", type=int, default=None, help="cap on boxes processed")
    p.add_argument("--generations", type=int, default=None, help="cap on DE generations")
    p.add_argument("--deterministic", action="store_true",
                   help="interleave both workers on one thread (reproducible)")
    p.add_argument("--activity-threshold", type=float, default=ACTIVITY_THRESHOLD)
    p.add_argument("--log-messages", metavar="PATH", default=None,
                   help="write the message log to PATH")
    p.add_argument("--porcelain", action="store_true", help="key=value output")
    return p


def config_from_args(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(eps=args.eps, eps_eq=args.eps_eq, np=args.np, w=args.w, cr=args.cr,
                        eta=args.eta, bisect=_BISECT[args.bisect], queue=args.queue,
                        seed=args.seed, mode=args.mode,
                        reduction_period=args.reduction_period, max_time=args.max_time,
                        max_iters=args.max_iters, generations=args.generations,
                        deterministic=args.deterministic)


def constraint_activity(problem: Problem, point, threshold: float = ACTIVITY_THRESHOLD
                        ) -> list[tuple[str, Interval, bool]]:
    """Interval value of each constraint at ``point`` and whether it is active.

    An inequality is active when the upper bound of its value lies in
    ``[-threshold, 0]``; an equality when its value fits its tolerance.
    """
    cons = constraint_system(problem)
    vals = point_values(cons, point)
    out = []
    for c, v in zip(cons, vals):
        if c.relation == "=":
            active = not v.is_empty and v.subset(c.bound)
            label = f"{format_expr(c.expr)} = 0"
        else:
            active = not v.is_empty and -threshold <= v.hi <= 0.0
            label = f"{format_expr(c.expr)} <= 0"
        out.append((label, v, active))
    return out


def _fmt_iv(v: Interval) -> str:
    return "empty" if v.is_empty else f"[{v.lo!r}, {v.hi!r}]"


def report_fields(problem: Problem, res: RunResult, threshold: float) -> list[tuple[str, str]]:
    cert = res.certificate
    status = cert.status.value
    if cert.status is Status.UNCERTIFIED:
        status = f"UNCERTIFIED(gap={cert.gap!r})"
    rows = [("status", status), ("f_best", repr(cert.upper_bound)),
            ("global_lb", repr(cert.lower_bound)), ("gap", repr(cert.gap))]
    if cert.point is not None:
        for name, v in zip(problem.names, cert.point):
            rows.append((f"x.{name}", repr(v)))
        for i, (label, v, active) in enumerate(
                constraint_activity(problem, cert.point, threshold)):
            rows.append((f"constraint.{i}", label))
            rows.append((f"constraint.{i}.value", _fmt_iv(v)))
            rows.append((f"constraint.{i}.active", str(active).lower()))
    st = cert.stats
    for key in ("boxes_processed", "max_queue_size", "ub_updates", "ub_updates_from_de",
                "ub_updates_from_ibc", "generations", "de_restarts"):
        if key in st:
            rows.append((key, str(st[key])))
    rows.append(("wall_time", f"{res.wall_time:.3f}"))
    return rows


def render(rows: list[tuple[str, str]], porcelain: bool) -> str:
    if porcelain:
        return "".join(f"{k}={v}\n" for k, v in rows)
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = load_model_text(args.model)
        problem = parse_problem(text, args.eps_eq)
    except ModelError as exc:
        print(f"{args.model}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        print(f"{args.model}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_PARSE
    res = orchestrate(problem, cfg)
    if args.log_messages:
        res.channel.write_log(args.log_messages)
    sys.stdout.write(render(report_fields(problem, res, args.activity_threshold),
                            args.porcelain))
    if res.certificate.status in (Status.CERTIFIED, Status.INFEASIBLE):
        return EXIT_OK
    return EXIT_UNCERTIFIED


if __name__ == "__main__":
    sys.exit(main())
