"""Tests for the command line interface."""

__author__ = "Jonas Van Der Donckt"

import inspect
import io
import os
import pytest
import pandas as pd

import predqueue.cli.main as cli
from predqueue.cli import build_parser
from predqueue.cli.main import main
from predqueue.utils.errors import NonConvergence
from .utils import config_file_path, logging_file_path, proj_dir, write_config


def _lines(capsys) -> dict:
    out = capsys.readouterr().out
    return dict(line.split(None, 1) for line in out.strip().split("\n"))


def test_analytic(capsys):
    assert main(["analytic", "--policy", "FIFO", "--lambda", "0.5"]) == 0
    fields = _lines(capsys)
    assert fields["policy"] == "FIFO"
    assert float(fields["expected_total"]) == pytest.approx(2.0)

    assert main(["analytic", "--policy", "sjf", "--lambda", "0.9", "--rel-tol", "1e-6"]) == 0
    assert float(_lines(capsys)["expected_total"]) == pytest.approx(4.1969, abs=2e-4)


def test_analytic_spjf_default_tolerances(capsys):
    # integrals over the interpolated prediction profile converge at the defaults
    assert main(["analytic", "--policy", "spjf", "--lambda", "0.9", "--model", "exp_mean_x"]) == 0
    assert float(_lines(capsys)["expected_total"]) == pytest.approx(5.3610, abs=2e-4)


def test_analytic_two_type(capsys):
    args = ["analytic", "--policy", "PRED_PRIORITY", "--lambda", "0.3", "--model", "two_type"]
    assert main(args + ["--p", "0.2", "--q", "0.1"]) == 0
    assert float(_lines(capsys)["expected_wait"]) > 0


@pytest.mark.parametrize(
    "args,code",
    [
        (["--policy", "FIFO", "--lambda", "1.2"], 3),
        (["--policy", "LIFO", "--lambda", "0.5"], 2),
        (["--policy", "PRIORITY", "--lambda", "0.5"], 2),
        (["--policy", "SJF", "--lambda", "0.5", "--model", "uniform_alpha", "--alpha", "2"], 2),
        (["--policy", "SJF", "--lambda", "0.5", "--y-max", "-1"], 2),
    ],
)
def test_analytic_exit_codes(args, code, capsys):
    assert main(["analytic"] + args) == code
    assert len(capsys.readouterr().err)


def test_nonconvergence_exit_code(monkeypatch, capsys):
    def _fail(*args, **kwargs):
        raise NonConvergence("integral of the test", 1.0, 0.5)

    monkeypatch.setattr(cli, "analyze", _fail)
    assert main(["analytic", "--policy", "SRPT", "--lambda", "0.5"]) == 4
    assert "integral of the test" in capsys.readouterr().err


def test_argparse_errors():
    with pytest.raises(SystemExit) as e_info:
        main(["analytic", "--policy", "SJF"])
    assert e_info.value.code == 2
    with pytest.raises(SystemExit):
        main(["table", "--which", "3"])
    with pytest.raises(SystemExit):
        main([])


def test_table(capsys):
    assert main(["table", "--which", "1", "--lambdas", "0.5,0.9", "--format", "csv"]) == 0
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(df.columns) == ["lambda", "SJF", "SPJF", "FIFO"]
    assert df["lambda"].tolist() == [0.5, 0.9]
    assert df["SJF"].tolist() == pytest.approx([1.7127, 4.1969], abs=2e-4)
    assert df["SPJF"].tolist() == pytest.approx([1.7948, 5.3610], abs=2e-4)
    assert df["FIFO"].tolist() == pytest.approx([2.0, 10.0])

    assert main(["table", "--which", "2", "--lambdas", "0.5"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "| lambda | SRPT | SPRPT |"
    assert len(lines) == 3


def test_table_simulated(capsys):
    args = ["table", "--lambdas", "0.5", "--trials", "2", "--horizon", "2000", "--warmup"]
    assert main(args + ["200", "--n-jobs", "0", "--format", "csv"]) == 0
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert df["policy"].tolist() == ["SJF", "SPJF", "FIFO"]
    assert (df["n_trials"] == 2).all()


def test_figure1(capsys, tmp_path):
    output = tmp_path / "sweep.csv"
    args = ["figure1", "--lambda", "0.5", "--alpha", "0,1", "--trials", "2"]
    args += ["--horizon", "1000", "--warmup", "100", "--n-jobs", "0", "--no-analytic"]
    assert main(args + ["--output", str(output)]) == 0
    df = pd.read_csv(output)
    assert len(df) == 4
    assert df["analytic_spjf"].isna().all()
    assert main(["figure1", "--alpha", "2"]) == 2


def test_pom(capsys):
    assert main(["pom", "--scenario", "finite_exp", "--n", "2"]) == 0
    fields = _lines(capsys)
    assert float(fields["informed"]) == pytest.approx(0.25, rel=1e-5)
    assert float(fields["predicted"]) == pytest.approx(1 / 3, rel=1e-5)
    assert float(fields["ratio"]) == pytest.approx(4 / 3, rel=1e-5)

    args = ["pom", "--scenario", "two_type", "--n-s", "200", "--n-l", "100", "--long", "4"]
    assert main(args + ["--p", "0.1", "--q", "0.2", "--form", "asymptotic"]) == 0
    assert float(_lines(capsys)["ratio"]) == pytest.approx(1.15)

    assert main(["pom", "--scenario", "priority"]) == 0
    assert float(_lines(capsys)["ratio"]) == pytest.approx(1.596410256 / 1.519047619, rel=1e-5)

    assert main(["pom", "--scenario", "spjf", "--lambda", "0.9"]) == 0
    assert float(_lines(capsys)["ratio"]) == pytest.approx(1.3641, abs=1e-4)

    assert main(["pom", "--scenario", "priority", "--confusion", "0.5,0.6;0,1"]) == 2
    assert main(["pom", "--scenario", "priority", "--rates", "0.5,0.4"]) == 3


SIMULATE_CONFIG = """
[model]
name = exp

[plan]
lambdas = 0.5
policies = FIFO, SRPT
trials = 2
horizon = 2000
warmup = 200
n_jobs = 0

[output]
format = markdown
path = {path}
"""


def test_simulate(config_file_path, logging_file_path, capsys, tmp_path):
    summary_path = tmp_path / "summary.md"
    write_config(config_file_path, SIMULATE_CONFIG.format(path=summary_path))
    assert main(["simulate", config_file_path, "--log", logging_file_path]) == 0
    trials = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert len(trials) == 4
    assert trials["seed"].tolist() == [0, 1, 0, 1]

    lines = summary_path.read_text().strip().split("\n")
    assert lines[0].startswith("| lambda | policy | analytic_total |")
    assert len(lines) == 4
    assert os.path.exists(logging_file_path)


def test_simulate_config_errors(config_file_path, capsys):
    write_config(config_file_path, "[model]\nname = exp\n\n[plan]\nlambdas = 0.5\n")
    assert main(["simulate", config_file_path]) == 2
    assert "[plan.policies]" in capsys.readouterr().err
    assert main(["simulate", proj_dir + "/tests/does_not_exist.ini"]) == 2


def test_parser_defaults():
    args = build_parser().parse_args(["table"])
    assert args.which == 1
    assert args.trials == 0
    assert args.format == "markdown"
    assert args.func is cli.cmd_table


def test_main_module_is_not_shadowed():
    import predqueue.cli

    assert inspect.ismodule(predqueue.cli.main)
    assert predqueue.cli.main is cli
    assert cli.main is main
    assert "main" not in predqueue.cli.__all__
