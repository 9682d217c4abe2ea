"""The ``predqueue`` command line interface.

Sub-commands
------------
analytic
    Evaluate one policy analytically at one arrival rate.
simulate
    Run the experiment of a run-configuration file.
table
    Reproduce the SJF/SPJF/FIFO (``--which 1``) or SRPT/SPRPT (``--which 2``)
    comparison table.
figure1
    Sweep the spread α of uniform multiplicative predictions.
pom
    Print the price of misprediction of a scenario.

Exit codes: 0 on success, 2 for configuration / argument errors, 3 when the
queue is unstable and 4 when the quadrature does not converge.

"""

__author__ = "Jonas Van Der Donckt, Jeroen Van Der Donckt"

import argparse
import sys
from typing import List, Optional

import numpy as np

from ..analytic import (
    analytic_table,
    analyze,
    finite_n_wait_full,
    finite_n_wait_predicted,
    price_of_misprediction,
    priority_mean_wait,
    priority_pom,
    sjf_wait,
    spjf_pom,
    spjf_wait,
    two_type_wait,
)
from ..experiment import ExperimentPlan, alpha_sweep, run_plan
from ..experiment.table import format_number, to_markdown
from ..models import (
    MODEL_NAMES,
    ClassModel,
    Exponential,
    exact,
    exponential_mean_x,
    model_from_config,
)
from ..utils.data import parse_float_list
from ..utils.errors import ConfigError, NonConvergence, Unstable
from ..utils.quadrature import QuadratureSettings
from .config import parse_run_config

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_NONCONVERGENCE = 0, 2, 3, 4

TABLE_LAMBDAS = (0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99)
TABLE_POLICIES = {1: ("SJF", "SPJF", "FIFO"), 2: ("SRPT", "SPRPT")}


def _print(text: str = ""):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write(text: str, path: Optional[str]):
    if path:
        with open(path, "w", newline="") as f:
            f.write(text)
    else:
        _print(text)


def _add_model_arguments(parser: argparse.ArgumentParser, default: str = "exp_mean_x"):
    group = parser.add_argument_group("model")
    group.add_argument("--model", default=default, choices=MODEL_NAMES)
    group.add_argument("--base", default="exp", choices=("exp", "weibull"))
    group.add_argument("--mean", type=float, default=1.0)
    group.add_argument("--alpha", type=float, default=0.5)
    group.add_argument("--short", type=float, default=1.0)
    group.add_argument("--long", type=float, default=3.0)
    group.add_argument("--short-fraction", type=float, default=0.5)
    group.add_argument("--p", type=float, default=0.0)
    group.add_argument("--q", type=float, default=0.0)


def _model(args: argparse.Namespace):
    try:
        return model_from_config(
            args.model,
            base=args.base,
            mean=args.mean,
            alpha=args.alpha,
            short=args.short,
            long=args.long,
            short_fraction=args.short_fraction,
            p=args.p,
            q=args.q,
        )
    except ValueError as e:
        raise ConfigError("model", str(e)) from None


def _add_quadrature_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("quadrature")
    group.add_argument("--rel-tol", type=float, default=1e-8)
    group.add_argument("--y-max", type=float, default=None)


def _settings(args: argparse.Namespace) -> QuadratureSettings:
    try:
        return QuadratureSettings(rel_tol=args.rel_tol, y_max=args.y_max)
    except ValueError as e:
        raise ConfigError("analytic", str(e)) from None


# ------------------------------------------------------------------ commands
def cmd_analytic(args: argparse.Namespace) -> int:
    """Print the expected wait, residence, total time and error estimate."""
    result = analyze(args.policy, _model(args), args.lam, _settings(args))
    for key, value in result.to_dict().items():
        _print(f"{key:<20}{format_number(value)}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run the experiment of a configuration file; print per-trial and per-cell rows."""
    config = parse_run_config(args.config)
    try:
        model = config.model.build()
    except ValueError as e:
        raise ConfigError("model", str(e)) from None
    plan = ExperimentPlan(
        model,
        config.plan.lambdas,
        config.plan.policies,
        trials=config.plan.trials,
        horizon=config.plan.horizon,
        warmup=config.plan.warmup,
        base_seed=config.plan.seed,
        settings=config.analytic.settings(),
    )
    n_jobs = args.n_jobs if args.n_jobs is not None else config.plan.n_jobs
    table = run_plan(
        plan,
        n_jobs=n_jobs,
        show_progress=args.progress,
        analytic=not args.no_analytic,
        logging_file_path=args.log,
    )
    out = config.output
    trials_path = str(out.trials_path) if out.trials_path else None
    summary_path = str(out.path) if out.path else None
    _write(table.trials_to_csv(), trials_path)
    if out.format == "markdown":
        _write(table.to_markdown(out.digits), summary_path)
    else:
        _write(table.to_csv(), summary_path)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    """Print the analytic (and optionally simulated) comparison table."""
    model = exponential_mean_x()
    policies = TABLE_POLICIES[args.which]
    lambdas = parse_float_list(args.lambdas)
    if args.trials:
        plan = ExperimentPlan(
            model,
            lambdas,
            policies,
            trials=args.trials,
            horizon=args.horizon,
            warmup=args.warmup,
            base_seed=args.seed,
        )
        table = run_plan(plan, n_jobs=args.n_jobs, show_progress=args.progress)
        text = table.to_csv() if args.format == "csv" else table.to_markdown()
    else:
        df = analytic_table(model, policies, lambdas)
        wide = df.pivot(index="lambda", columns="policy", values="expected_total")
        wide = wide[list(policies)].reset_index()
        wide.columns.name = None
        text = wide.to_csv(index=False) if args.format == "csv" else to_markdown(wide)
    _write(text, args.output)
    return EXIT_OK


def cmd_figure1(args: argparse.Namespace) -> int:
    """Emit the plot-ready CSV of the α-sweep."""
    df = alpha_sweep(
        base_dist="exponential" if args.dist == "exp" else "weibull",
        lam=args.lam,
        alphas=args.alpha,
        policies=[p.strip() for p in args.policies.split(",") if p.strip()],
        trials=args.trials,
        horizon=args.horizon,
        warmup=args.warmup,
        base_seed=args.seed,
        analytic=not args.no_analytic,
        n_jobs=args.n_jobs,
        show_progress=args.progress,
    )
    _write(df.to_csv(index=False), args.output)
    return EXIT_OK


def _confusion(text: str) -> np.ndarray:
    return np.array([parse_float_list(row) for row in text.split(";")])


def cmd_pom(args: argparse.Namespace) -> int:
    """Print the informed metric, the predicted metric and their ratio."""
    if args.scenario == "finite_exp":
        full = finite_n_wait_full(exact(Exponential(1.0)), args.n)
        predicted = finite_n_wait_predicted(exponential_mean_x(), args.n)
        ratio = price_of_misprediction(full, predicted)
    elif args.scenario == "two_type":
        full = two_type_wait(
            args.n_s, args.n_l, args.short, args.long, args.p, args.q, "full", args.form
        )
        predicted = two_type_wait(
            args.n_s, args.n_l, args.short, args.long, args.p, args.q, "predicted", args.form
        )
        ratio = price_of_misprediction(full, predicted)
    elif args.scenario == "priority":
        means = parse_float_list(args.means)
        try:
            cm = ClassModel(
                parse_float_list(args.rates),
                [Exponential(m) for m in means],
                _confusion(args.confusion),
            )
        except ValueError as e:
            raise ConfigError("priority", str(e)) from None
        full = priority_mean_wait(cm, predicted=False)
        predicted = priority_mean_wait(cm, predicted=True)
        ratio = priority_pom(cm)
    else:
        model = _model(args)
        full = sjf_wait(model, args.lam)
        predicted = spjf_wait(model, args.lam)
        ratio = spjf_pom(model, args.lam)
    _print(f"{'informed':<12}{format_number(full)}")
    _print(f"{'predicted':<12}{format_number(predicted)}")
    _print(f"{'ratio':<12}{format_number(ratio)}")
    return EXIT_OK


# ------------------------------------------------------------------- parsing
def _add_execution_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--n-jobs",
        type=int,
        default=None,
        help="number of processes (default: $PREDQUEUE_N_JOBS or #CPUs)",
    )
    parser.add_argument("--progress", action="store_true", help="show a progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predqueue", description="Scheduling with predicted job sizes in a single queue"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="evaluate one policy analytically")
    p.add_argument("--policy", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    _add_model_arguments(p)
    _add_quadrature_arguments(p)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="run the experiment of a configuration file")
    p.add_argument("config", help="the INI run-configuration file")
    p.add_argument("--no-analytic", action="store_true", help="skip the analytic column")
    p.add_argument("--log", default=None, help="file to log the trial durations to")
    _add_execution_arguments(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="reproduce a comparison table")
    p.add_argument("--which", type=int, choices=(1, 2), default=1)
    p.add_argument("--lambdas", default=",".join(str(v) for v in TABLE_LAMBDAS))
    p.add_argument("--trials", type=int, default=0, help="simulated trials per cell")
    p.add_argument("--horizon", type=float, default=200_000)
    p.add_argument("--warmup", type=float, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--output", default=None)
    _add_execution_arguments(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("figure1", help="sweep the prediction spread alpha")
    p.add_argument("--dist", choices=("exp", "weibull"), default="exp")
    p.add_argument("--lambda", dest="lam", type=float, default=0.95)
    p.add_argument("--alpha", default="0,0.25,0.5,0.75,1")
    p.add_argument("--policies", default="SPJF,SPRPT")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--horizon", type=float, default=200_000)
    p.add_argument("--warmup", type=float, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-analytic", action="store_true")
    p.add_argument("--output", default=None)
    _add_execution_arguments(p)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("pom", help="price of misprediction of a scenario")
    p.add_argument(
        "--scenario", required=True, choices=("finite_exp", "two_type", "priority", "spjf")
    )
    p.add_argument("--n", type=int, default=2, help="batch size (finite_exp)")
    p.add_argument("--n-s", type=float, default=1.0, help="number of short jobs (two_type)")
    p.add_argument("--n-l", type=float, default=1.0, help="number of long jobs (two_type)")
    p.add_argument("--form", choices=("exact", "asymptotic"), default="exact")
    p.add_argument("--rates", default="0.3,0.2", help="class arrival rates (priority)")
    p.add_argument("--means", default="1,2", help="class mean service times (priority)")
    p.add_argument(
        "--confusion",
        default="0.9,0.1;0.2,0.8",
        help="row-stochastic confusion matrix, rows separated by ';'",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=0.9)
    _add_model_arguments(p)
    p.set_defaults(func=cmd_pom)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line interface and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_CONFIG
    except Unstable as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_UNSTABLE
    except NonConvergence as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_NONCONVERGENCE
    except (TypeError, ValueError) as e:
        sys.stderr.write(f"invalid arguments: {e}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
