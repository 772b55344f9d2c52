"""Command-line front end.

Exit codes: 0 = all verdicts pass, 1 = a verdict failed, 2 = bad
configuration.  Output directory resolution order: --out flag, the
VILENKIN_LAB_OUTDIR environment variable, the config's out_dir, cwd.
"""

from __future__ import annotations

import json
import math
import sys

import click
import numpy as np

from . import axioms, experiments, kernels, trig
from .experiments import ExperimentConfig
from .group import build_spec
from .transform import forward, step_function_from_json, spectrum_to_json, StepFunction


def _fail_config(message):
    click.echo(f"config error: {message}", err=True)
    sys.exit(2)


def _finish(report, name, out):
    path = experiments.write_report(report, name, out_dir=out)
    click.echo(f"report: {path}")
    click.echo(f"verdict: {'PASS' if report['verdict'] else 'FAIL'}")
    sys.exit(0 if report["verdict"] else 1)


def _common_cfg(kind, m, resolution, seed, **kwargs):
    try:
        return ExperimentConfig(
            kind=kind, m=list(m), resolution=resolution, seed=seed, **kwargs
        )
    except (ValueError, TypeError) as exc:
        _fail_config(str(exc))


@click.group()
def main():
    """Numerical lab for Vilenkin and trigonometric Fejér summability."""


@main.command("spec")
@click.option("--m", "m", multiple=True, type=int, required=True, help="generator orders (repeatable)")
@click.option("--resolution", "-L", type=int, default=None)
def spec_cmd(m, resolution):
    """Print the generalized number system for a group spec."""
    try:
        spec = build_spec(m, resolution)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    click.echo(json.dumps({"m": list(spec.m), "M": list(spec.M), "lambda": spec.lam}))


@main.command("transform")
@click.option("--m", multiple=True, type=int, required=True)
@click.option("--resolution", "-L", type=int, default=None)
@click.argument("input_json", type=click.File("r"))
def transform_cmd(m, resolution, input_json):
    """Forward-transform a step function given as JSON on stdin or file."""
    try:
        spec = build_spec(m, resolution)
        f = step_function_from_json(input_json.read())
    except (ValueError, OverflowError, KeyError) as exc:
        _fail_config(str(exc))
    click.echo(spectrum_to_json(forward(f, spec)))


@main.command("kernel")
@click.option("--m", multiple=True, type=int, help="group mode when given; circle mode otherwise")
@click.option("--resolution", "-L", type=int, default=0)
@click.option("--n", "ns", multiple=True, type=int, required=True)
@click.option("--grid-size", type=int, default=2 ** 14)
@click.option("--out", type=click.Path(), default=None)
def kernel_cmd(m, resolution, ns, grid_size, out):
    """Dump kernel tables (and the trig envelope) as CSV."""
    cfg = _common_cfg(
        "kernel-dump", m, resolution, 0, schedule=list(ns), grid_size=grid_size
    )
    try:
        paths = experiments.dump_kernel(cfg, out_dir=out)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    for path in paths:
        click.echo(str(path))


@main.group("verify")
def verify_group():
    """Kernel-estimate and axiom verification suites."""


@verify_group.command("kernels")
@click.option("--m", multiple=True, type=int, default=(2,))
@click.option("--resolution", "-L", type=int, default=9)
@click.option("--big-n", "N", type=int, default=3)
@click.option("--n-max", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
@click.option("--seed", type=int, default=0)
def verify_kernels(m, resolution, N, n_max, out, seed):
    """Unit integral, bounded L1 sups and vanishing tails of K_n."""
    cfg = _common_cfg("kernel-suite", m, resolution, seed, N=N, n_max=n_max)
    try:
        report = experiments.run_kernel_suite(cfg)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    _finish(report, "kernels", out)


@verify_group.command("maximal")
@click.option("--m", multiple=True, type=int, default=(2,))
@click.option("--resolution", "-L", type=int, default=9)
@click.option("--big-n", "N", type=int, default=3)
@click.option("--n-max", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def verify_maximal(m, resolution, N, n_max, out):
    """Restricted maximal kernel: integral over the complement of I_N."""
    try:
        spec = build_spec(m, resolution)
        n_max = n_max or spec.M[spec.resolution]
        suite = axioms.kernel_suite(spec, N, n_max)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    cfg = _common_cfg("kernel-suite", m, resolution, 0, N=N, n_max=n_max)
    results = suite["restricted_maximal"]
    ok = math.isfinite(results["integral"]) and results["partition_gap"] < 1e-12
    _finish(experiments._report(cfg, results, ok), "maximal", out)


@verify_group.command("trig-tail")
@click.option("--eps", type=float, default=0.125)
@click.option("--n", "ns", multiple=True, type=int, default=(16, 64, 256, 1024))
@click.option("--grid-size", type=int, default=2 ** 14)
@click.option("--out", type=click.Path(), default=None)
def verify_trig_tail(eps, ns, grid_size, out):
    """Trig kernel: unit integral, vanishing tail integral and tail sup."""
    try:
        results = trig.tail_report(eps, list(ns), grid_size)
    except ValueError as exc:
        _fail_config(str(exc))
    ok = all(abs(r["total_integral"] - 1.0) <= axioms.TOL_QUADRATURE for r in results["rows"])
    cfg = _common_cfg("axiom-check", (), 0, 0, schedule=list(ns), grid_size=grid_size)
    _finish(experiments._report(cfg, results, ok), "trig_tail", out)


@verify_group.command("axioms")
@click.option("--m", multiple=True, type=int, help="group family when given, trig family otherwise")
@click.option("--resolution", "-L", type=int, default=0)
@click.option("--big-n", "N", type=int, default=3)
@click.option("--dyadic-max", type=int, default=1024)
@click.option("--grid-size", type=int, default=2 ** 14)
@click.option("--out", type=click.Path(), default=None)
def verify_axioms(m, resolution, N, dyadic_max, grid_size, out):
    """Run the (A1)-(A4) checks for a built-in kernel family."""
    cfg = _common_cfg(
        "axiom-check", m, resolution, 0,
        N=N, dyadic_max=dyadic_max, grid_size=grid_size,
    )
    try:
        report = experiments.run_axiom_check(cfg)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    _finish(report, "axioms", out)


@verify_group.command("probe")
@click.option("--m", multiple=True, type=int, default=(2,))
@click.option("--resolution", "-L", type=int, default=8)
@click.option("--k-max", type=int, default=8)
@click.option("--n-max", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def verify_probe(m, resolution, k_max, n_max, out):
    """The counterexample probe separating Vilenkin from trig behavior."""
    try:
        spec = build_spec(m, resolution)
        results = axioms.a4_failure_probe(
            spec, range(1, k_max + 1), n_max=n_max or None
        )
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    ok = all(r["deviation"] <= axioms.TOL_EXACT for r in results["rows"])
    cfg = _common_cfg("axiom-check", m, resolution, 0, n_max=n_max)
    _finish(experiments._report(cfg, results, ok), "probe", out)


@main.group("converge")
def converge_group():
    """Norm and pointwise convergence experiments."""


def _run_configured(kind, config, out, overrides):
    if config:
        try:
            cfg = ExperimentConfig.from_json_file(config)
        except (OSError, ValueError, KeyError) as exc:
            _fail_config(str(exc))
        cfg.kind = kind
    else:
        cfg = overrides
    try:
        report = experiments.run(cfg)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    _finish(report, kind.replace("-", "_"), out)


@converge_group.command("norm")
@click.option("--config", type=click.Path(exists=True), default=None, help="JSON config file")
@click.option("--m", multiple=True, type=int, default=(2,))
@click.option("--resolution", "-L", type=int, default=6)
@click.option("--function", default='{"kind": "cylinder", "rank": 2}')
@click.option("--schedule", default="", help="comma-separated n list")
@click.option("--dyadic-max", type=int, default=64)
@click.option("--p", type=float, default=1.0)
@click.option("--threshold", type=float, default=1e-2)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def converge_norm(config, m, resolution, function, schedule, dyadic_max, p, threshold, seed, out):
    """||sigma_n f - f||_p trace over an n ladder."""
    try:
        fn = json.loads(function)
        sched = [int(s) for s in schedule.split(",") if s]
    except ValueError as exc:
        _fail_config(str(exc))
    cfg = _common_cfg(
        "norm-convergence", m, resolution, seed,
        function=fn, schedule=sched, dyadic_max=dyadic_max, p=p, threshold=threshold,
    )
    _run_configured("norm-convergence", config, out, cfg)


@converge_group.command("ae")
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--m", multiple=True, type=int, default=(), help="group mode when given")
@click.option("--resolution", "-L", type=int, default=6)
@click.option("--function", default='{"kind": "square-wave"}')
@click.option("--schedule", default="", help="comma-separated n list")
@click.option("--dyadic-max", type=int, default=1024)
@click.option("--grid-size", type=int, default=2 ** 14)
@click.option("--threshold", type=float, default=1e-2)
@click.option("--probe-count", type=int, default=8)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def converge_ae(config, m, resolution, function, schedule, dyadic_max, grid_size,
                threshold, probe_count, seed, out):
    """Pointwise traces at probe points, including jump-point targets."""
    try:
        fn = json.loads(function)
        sched = [int(s) for s in schedule.split(",") if s]
    except ValueError as exc:
        _fail_config(str(exc))
    cfg = _common_cfg(
        "ae-probe", m, resolution, seed,
        function=fn, schedule=sched, dyadic_max=dyadic_max,
        grid_size=grid_size, threshold=threshold, probe_count=probe_count,
    )
    _run_configured("ae-probe", config, out, cfg)


@main.command("weaktype")
@click.option("--config", type=click.Path(exists=True), default=None)
@click.option("--m", multiple=True, type=int, default=(2,))
@click.option("--resolution", "-L", type=int, default=6)
@click.option("--n-max", type=int, default=0)
@click.option("--corpus-size", type=int, default=50)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def weaktype_cmd(config, m, resolution, n_max, corpus_size, seed, out):
    """Empirical weak-type (1,1) constant over a seeded corpus."""
    cfg = _common_cfg(
        "weak-type", m, resolution, seed, n_max=n_max, corpus_size=corpus_size
    )
    _run_configured("weak-type", config, out, cfg)


@main.command("dump")
@click.option("--config", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None)
def dump_cmd(config, out):
    """Run any experiment kind from a JSON config file."""
    try:
        cfg = ExperimentConfig.from_json_file(config)
    except (OSError, ValueError, KeyError) as exc:
        _fail_config(str(exc))
    if cfg.kind == "kernel-dump":
        try:
            paths = experiments.dump_kernel(cfg, out_dir=out)
        except (ValueError, OverflowError) as exc:
            _fail_config(str(exc))
        for path in paths:
            click.echo(str(path))
        sys.exit(0)
    try:
        report = experiments.run(cfg)
    except (ValueError, OverflowError) as exc:
        _fail_config(str(exc))
    _finish(report, cfg.kind.replace("-", "_"), out)


if __name__ == "__main__":
    main()
