"""Command-line interface.

Subcommands::

    tempered-wave solve        single solve, final field as CSV (x,u)
    tempered-wave converge     convergence study, CSV (tau,h,max_error,rate)
    tempered-wave dump-coeffs  coefficient tables as CSV
    tempered-wave verify       positivity / PSD / stability / oracle checks

``--output-format json`` emits a run record ``{params, rows, wall_ms,
version}`` instead of CSV. A run record can be passed back with
``--config FILE`` to repeat the run.

Exit status: 0 on success, 1 on runtime failure (or a failed check in
``verify``), 2 on invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from ._version import __version__
from .analysis import convergence_study, error_report, run_verification, table1_resolutions
from .kernels import grunwald_coeffs, riesz_weights, tempered_coeffs
from .problems import PROBLEMS
from .solver import Discretization, solve

log = logging.getLogger("tempered_wave")

SUBCOMMANDS = ("solve", "converge", "dump-coeffs", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    problem: str = "manufactured"
    alpha: float = 1.5
    gamma: float = 2.0
    lam: float = 0.1
    m: int = 20
    n: int = 10
    t_final: float = 0.5
    domain: tuple = (0.0, 1.0)
    resolutions: tuple = (20, 40, 80, 160)
    workers: Optional[int] = None
    kind: str = "tempered"
    beta: float = 1.0
    tau: float = 1.0
    count: int = 16
    seed: int = 0

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if not 1.0 < self.alpha <= 2.0:
            raise UsageError("--alpha must lie in (1, 2]")
        if not 1.0 < self.gamma <= 2.0:
            raise UsageError("--gamma must lie in (1, 2]")
        if not self.lam >= 0.0:
            raise UsageError("--lambda must be >= 0")
        if self.m < 3:
            raise UsageError("--m must be >= 3")
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if not self.t_final > 0:
            raise UsageError("--t-final must be > 0")
        if len(self.domain) != 2 or not self.domain[1] > self.domain[0]:
            raise UsageError("--domain must be a,b with a < b")
        if self.problem not in PROBLEMS:
            raise UsageError(f"--problem must be one of {sorted(PROBLEMS)}")
        if self.problem == "manufactured" and tuple(self.domain) != (0.0, 1.0):
            raise UsageError("--domain: the manufactured problem is posed on (0, 1)")
        if len(self.resolutions) < 2 or min(self.resolutions) < 1:
            raise UsageError("--resolutions needs at least two positive integers")
        if self.kind not in ("tempered", "riesz", "grunwald"):
            raise UsageError("--kind must be tempered, riesz or grunwald")
        if self.subcommand == "dump-coeffs":
            if self.kind == "tempered" and not 0.0 < self.beta <= 1.0:
                raise UsageError("--beta must lie in (0, 1]")
            if not self.tau > 0:
                raise UsageError("--tau must be > 0")
            if self.count < (4 if self.kind == "riesz" else 1):
                raise UsageError("--count is too small")
        if self.workers is not None and self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def to_params(self) -> dict:
        d = asdict(self)
        d["domain"] = list(self.domain)
        d["resolutions"] = list(self.resolutions)
        return d

    @classmethod
    def from_params(cls, params: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(params) - known
        if unknown:
            raise UsageError(f"--config: unknown parameters {sorted(unknown)}")
        params = dict(params)
        for key in ("domain", "resolutions"):
            if key in params:
                params[key] = tuple(params[key])
        return cls(**params)


# {{{ argument parsing


def _float_pair(text: str) -> tuple:
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    return (a, b)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(s) for s in text.split(",") if s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempered-wave",
        description="Second-order solver for the space-time tempered fractional "
        "diffusion-wave equation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON run record whose params repeat a run")
    parser.add_argument("-v", "--verbose", action="store_true")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output-format", choices=("csv", "json"), default="csv")
    out.add_argument("--output-path", help="write output here instead of stdout")
    out.add_argument("--record", help="also write the JSON run record to this path")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--problem", default="manufactured")
    model.add_argument("--alpha", type=float, default=1.5)
    model.add_argument("--gamma", type=float, default=2.0)
    model.add_argument("--lambda", dest="lam", type=float, default=0.1)
    model.add_argument("--t-final", dest="t_final", type=float, default=0.5)
    model.add_argument("--domain", type=_float_pair, default=(0.0, 1.0))

    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("solve", parents=[model, out], help="run a single solve")
    p.add_argument("--m", type=int, default=20, help="number of space intervals")
    p.add_argument("--n", type=int, default=10, help="number of time steps")

    p = sub.add_parser("converge", parents=[model, out], help="convergence study")
    p.add_argument(
        "--resolutions", type=_int_list, default=(20, 40, 80, 160),
        help="values of 1/h = 1/tau, comma separated",
    )
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("dump-coeffs", parents=[out], help="write coefficient tables")
    p.add_argument("--kind", choices=("tempered", "riesz", "grunwald"), default="tempered")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--count", type=int, default=16)

    p = sub.add_parser("verify", parents=[out], help="run the verification checks")
    p.add_argument("--seed", type=int, default=0)

    return parser


# }}}


# {{{ commands


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _record(config: RunConfig, rows: list, wall: float, **extra) -> dict:
    return {
        "params": config.to_params(),
        "rows": rows,
        "wall_ms": 1000.0 * wall,
        "version": __version__,
        **extra,
    }


def _problem(config: RunConfig):
    return PROBLEMS[config.problem](config.alpha, config.gamma, config.lam, horizon=config.t_final)


def cmd_solve(config: RunConfig):
    problem = _problem(config)
    disc = Discretization.for_problem(problem, config.m, config.n)
    result = solve(problem, disc)
    x = disc.nodes
    u = result.full_field()
    text = _csv(("x", "u"), zip(x.tolist(), u.tolist()))

    diagnostics = dict(result.diagnostics)
    if problem.exact is not None:
        rep = error_report(result.u, problem.exact(disc.interior, disc.T), disc.h)
        diagnostics.update(max_error=rep.max_error, l2_error=rep.l2_error)
    rows = [{"x": xi, "u": ui} for xi, ui in zip(x.tolist(), u.tolist())]
    return text, _record(config, rows, result.wall_time, diagnostics=diagnostics), True


def cmd_converge(config: RunConfig):
    problem = _problem(config)
    a, b = config.domain
    try:
        resolutions = table1_resolutions(config.resolutions, b - a, config.t_final)
    except ValueError as exc:
        raise UsageError(f"--resolutions: {exc}") from None
    report = convergence_study(problem, resolutions, workers=config.workers)
    record = report.to_record()
    record["params"] = config.to_params()
    return report.to_csv(), record, True


def cmd_dump_coeffs(config: RunConfig):
    start = time.perf_counter()
    if config.kind == "tempered":
        values = tempered_coeffs(config.beta, config.lam, config.tau, config.count).l
        header = ("k", "l_k")
    elif config.kind == "riesz":
        values = riesz_weights(config.alpha, config.count).weights
        header = ("m", "w_m")
    else:
        values = grunwald_coeffs(config.beta, config.count).g
        header = ("m", "g_m")

    pairs = list(enumerate(values.tolist()))
    rows = [{header[0]: i, header[1]: v} for i, v in pairs]
    return _csv(header, pairs), _record(config, rows, time.perf_counter() - start), True


def cmd_verify(config: RunConfig):
    start = time.perf_counter()
    results = run_verification(seed=config.seed)
    text = "".join(r.line() + "\n" for r in results)
    rows = [asdict(r) for r in results]
    ok = all(r.passed for r in results)
    return text, _record(config, rows, time.perf_counter() - start), ok


COMMANDS = {
    "solve": cmd_solve,
    "converge": cmd_converge,
    "dump-coeffs": cmd_dump_coeffs,
    "verify": cmd_verify,
}


def dispatch(config: RunConfig, output_format: str = "csv", output_path=None, record_path=None) -> int:
    """Validate ``config``, run it and write the outputs. Returns the exit status."""
    config.validate()
    text, record, ok = COMMANDS[config.subcommand](config)

    payload = json.dumps(record, indent=2) + "\n" if output_format == "json" else text
    if output_path:
        with open(output_path, "w", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)

    if record_path:
        with open(record_path, "w", newline="\n") as fh:
            json.dump(record, fh, indent=2)
            fh.write("\n")
    return 0 if ok else 1


# }}}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                params = json.load(fh)["params"]
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"--config: cannot read run record ({exc})") from None
        return RunConfig.from_params(params)

    if args.subcommand is None:
        raise UsageError("a subcommand is required (solve, converge, dump-coeffs, verify)")

    known = {f.name for f in fields(RunConfig)}
    values = {k: v for k, v in vars(args).items() if k in known}
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = _config_from_args(args)
        return dispatch(
            config,
            output_format=getattr(args, "output_format", "csv"),
            output_path=getattr(args, "output_path", None),
            record_path=getattr(args, "record", None),
        )
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("run failed", exc_info=True)
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

# vim: fdm=marker
