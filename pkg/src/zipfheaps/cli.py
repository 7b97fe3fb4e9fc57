"""Command line entry point.

Subcommands::

    expect       --alpha A --n N [--eps E]
    simulate     --alpha A --n N --trials T [--seed S]
    fit          --input curve.csv [--min-m M]
    analyze      --input text.txt [--input more.txt ...] [--min-m M]
    reciprocity  --alpha A --n N [--trials T] [--seed S] [--min-m M]

Primary records go to stdout (``--format csv`` or ``jsonl``).  Auxiliary
tables (``growth.csv``, ``ranks.csv``) go to ``--out-dir``, defaulting to
``$ZIPFHEAPS_OUTPUT_DIR`` or the working directory.

Exit status: 0 success, 1 invalid input, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus, expectation, fit, records, simulate
from .numerics import DomainError, NumericalFailure, RandomStream
from .zipf import ZipfParams

OUTPUT_DIR_ENV = "ZIPFHEAPS_OUTPUT_DIR"
SEED_MAX = 2**64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    alpha: float = 2.0
    n: int = 0
    trials: int = 1
    seed: int = 0
    eps: float = 1e-9
    inputs: list[str] = field(default_factory=list)
    output_format: str = "csv"
    min_m: int = fit.DEFAULT_MIN_M
    out_dir: Path = Path(".")

    def validate(self):
        if not self.alpha > 1.0:
            raise DomainError(
                f"--alpha must be > 1 (the Zipf normalizer diverges for alpha <= 1), got {self.alpha}"
            )
        if self.n < 0:
            raise DomainError(f"--n must be >= 0, got {self.n}")
        if self.trials < 1:
            raise DomainError(f"--trials must be >= 1, got {self.trials}")
        if not self.eps > 0:
            raise DomainError(f"--eps must be > 0, got {self.eps}")
        if not 0 <= self.seed < SEED_MAX:
            raise DomainError("--seed must fit in an unsigned 64-bit integer")
        if self.min_m < 1:
            raise DomainError("--min-m must be >= 1")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zipfheaps", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", dest="output_format", choices=("csv", "jsonl"), default="csv")
        p.add_argument("--out-dir", default=None)

    def model(p, trials_default=None):
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--n", type=int, required=True)
        if trials_default is None:
            p.add_argument("--trials", type=int, required=True)
        else:
            p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("expect", help="E X by every evaluator")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, default=1e-9)
    common(p)

    p = sub.add_parser("simulate", help="Monte Carlo distinct counts and a growth curve")
    model(p)
    common(p)

    p = sub.add_parser("fit", help="Heaps exponent of a growth curve CSV")
    p.add_argument("--input", dest="inputs", action="append", required=True)
    p.add_argument("--min-m", type=int, default=fit.DEFAULT_MIN_M)
    common(p)

    p = sub.add_parser("analyze", help="growth curve, rank table and exponents of a text")
    p.add_argument("--input", dest="inputs", action="append", required=True)
    p.add_argument("--min-m", type=int, default=fit.DEFAULT_MIN_M)
    common(p)

    p = sub.add_parser("reciprocity", help="synthetic end-to-end alpha * beta check")
    model(p, trials_default=1)
    p.add_argument("--min-m", type=int, default=fit.DEFAULT_MIN_M)
    common(p)
    return parser


def config_from_args(args) -> RunConfig:
    out_dir = args.out_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    cfg = RunConfig(subcommand=args.subcommand, output_format=args.output_format, out_dir=Path(out_dir))
    for name in ("alpha", "n", "trials", "seed", "eps", "inputs", "min_m"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    cfg.validate()
    return cfg


def cmd_expect(cfg: RunConfig, out):
    params = ZipfParams(cfg.alpha)
    rows = [
        {"method": r.method.value, "value": r.value, "error": r.abs_error_bound}
        for r in expectation.all_methods(params, cfg.n, cfg.eps)
    ]
    records.write_records(rows, out, cfg.output_format)


def cmd_simulate(cfg: RunConfig, out):
    params = ZipfParams(cfg.alpha)
    if cfg.trials < 2:
        raise DomainError("simulate needs --trials >= 2 for a standard error")
    est = simulate.monte_carlo_distinct(params, cfg.n, cfg.trials, cfg.seed)
    curve = simulate.simulate_growth_curve(params, cfg.n, RandomStream.derive(cfg.seed, 0))
    _write_aux(cfg, "growth.csv", records.GROWTH_HEADER, curve.points)
    records.write_records(
        [{"alpha": cfg.alpha, "n": cfg.n, "trials": est.trials, "seed": cfg.seed,
          "mean": est.mean, "std_error": est.std_error}],
        out, cfg.output_format,
    )


def _fit_row(name, res: fit.FitResult):
    return {"fit": name, "exponent": res.exponent, "log_intercept": res.log_intercept,
            "residual_rms": res.residual_rms, "points_used": res.points_used,
            "at_bracket_edge": res.at_bracket_edge}


def cmd_fit(cfg: RunConfig, out):
    points = []
    for path in cfg.inputs:
        try:
            points.extend(records.read_growth_csv(path))
        except (OSError, ValueError, IndexError) as exc:
            raise DomainError(f"cannot read curve {path}: {exc}") from None
    res = fit.fit_heaps(sorted(points), cfg.min_m)
    records.write_records([_fit_row("heaps", res)], out, cfg.output_format)


def cmd_analyze(cfg: RunConfig, out):
    diag = corpus.TokenizeDiagnostics()
    try:
        curve, table = corpus.analyze_stream(corpus.tokenize_paths(cfg.inputs, diag))
    except OSError as exc:
        raise DomainError(f"cannot read input: {exc}") from None
    _write_aux(cfg, "growth.csv", records.GROWTH_HEADER, curve.points)
    _write_aux(cfg, "ranks.csv", records.RANK_HEADER, table.entries)
    heaps = fit.fit_heaps(curve, cfg.min_m)
    zipf = fit.fit_zipf_alpha(table)
    rep = fit.reciprocity_report(zipf.exponent, heaps.exponent)
    row = {"tokenizer": corpus.TOKENIZER, "tokens": table.total, "distinct": len(table),
           "invalid_utf8": diag.invalid_utf8, "alpha_hat": rep.alpha_hat,
           "beta_hat": rep.beta_hat, "product": rep.product, "deviation": rep.deviation,
           "heaps_points": heaps.points_used, "heaps_rms": heaps.residual_rms,
           "alpha_at_edge": zipf.at_bracket_edge}
    records.write_records([row], out, cfg.output_format)


def cmd_reciprocity(cfg: RunConfig, out):
    params = ZipfParams(cfg.alpha)
    if cfg.n < 2:
        raise DomainError("reciprocity needs --n >= 2")
    rows = []
    for t in range(cfg.trials):
        run = fit.synthetic_reciprocity(params, cfg.n, RandomStream.derive(cfg.seed, t), cfg.min_m)
        rep = run.report
        rows.append({"trial": t, "alpha": cfg.alpha, "n": cfg.n, "alpha_hat": rep.alpha_hat,
                     "beta_hat": rep.beta_hat, "product": rep.product, "deviation": rep.deviation})
    if cfg.trials > 1:
        a = sum(r["alpha_hat"] for r in rows) / len(rows)
        b = sum(r["beta_hat"] for r in rows) / len(rows)
        rep = fit.reciprocity_report(a, b)
        rows.append({"trial": "mean", "alpha": cfg.alpha, "n": cfg.n, "alpha_hat": a,
                     "beta_hat": b, "product": rep.product, "deviation": rep.deviation})
    records.write_records(rows, out, cfg.output_format)


def _write_aux(cfg, name, header, rows):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    records.write_table(cfg.out_dir / name, header, rows)


COMMANDS = {
    "expect": cmd_expect,
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "analyze": cmd_analyze,
    "reciprocity": cmd_reciprocity,
}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
        COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        err.write(f"zipfheaps: error: {exc}\n")
        return 1
    except DomainError as exc:
        err.write(f"zipfheaps: error: {exc}\n")
        return 1
    except NumericalFailure as exc:
        err.write(f"zipfheaps: numerical failure: {exc}\n")
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
