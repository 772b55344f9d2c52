"""Experiment configuration, runners and report persistence.

Every runner consumes an ExperimentConfig and returns a plain-dict report
carrying a schema version, the full config echo (seed included) and a
boolean verdict; `write_report` persists it as canonical JSON plus CSV
trace tables.  Identical config + seed gives byte-identical files: the RNG
is a single seeded PCG64, dict keys are sorted, floats are written with
repr round-tripping, and no timestamps enter the output.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import axioms, kernels, testfuncs, trig
from .group import GroupSpec, build_spec, point_from_index
from .transform import StepFunction, integrate, lp_norm

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "VILENKIN_LAB_OUTDIR"


@dataclass
class ExperimentConfig:
    """One experiment run: domain, test function, schedule, thresholds."""

    kind: str  # norm-convergence | ae-probe | weak-type | kernel-suite | axiom-check | kernel-dump
    m: list = field(default_factory=list)  # group generator pattern; empty = circle
    resolution: int = 0
    grid_size: int = 2 ** 14
    function: dict = field(default_factory=dict)  # {"kind": ..., params}
    schedule: list = field(default_factory=list)  # explicit n list
    dyadic_max: int = 0  # or a dyadic ladder 1, 2, 4, ..., dyadic_max
    p: float = 1.0
    seed: int = 0
    threshold: float = 1e-2
    n_max: int = 0
    N: int = 0
    corpus_size: int = 50
    probe_count: int = 8
    out_dir: str = ""

    def group_spec(self):
        if not self.m:
            raise ValueError("this experiment needs a group spec (m, resolution)")
        return build_spec(self.m, self.resolution or None)

    def n_schedule(self, limit=None):
        if self.schedule:
            ns = [int(n) for n in self.schedule]
        elif self.dyadic_max:
            ns, n = [], 1
            while n <= self.dyadic_max:
                ns.append(n)
                n *= 2
        else:
            raise ValueError("empty n schedule")
        if not ns:
            raise ValueError("empty n schedule")
        if limit is not None and max(ns) > limit:
            raise ValueError(f"schedule exceeds resolution limit {limit}")
        return ns

    def to_dict(self):
        return {
            "kind": self.kind,
            "m": list(self.m),
            "resolution": self.resolution,
            "grid_size": self.grid_size,
            "function": self.function,
            "schedule": list(self.schedule),
            "dyadic_max": self.dyadic_max,
            "p": self.p,
            "seed": self.seed,
            "threshold": self.threshold,
            "n_max": self.n_max,
            "N": self.N,
            "corpus_size": self.corpus_size,
            "probe_count": self.probe_count,
        }

    @staticmethod
    def from_dict(obj):
        cfg = ExperimentConfig(kind=obj["kind"])
        for key, value in obj.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config field {key!r}")
            setattr(cfg, key, value)
        return cfg

    @staticmethod
    def from_json_file(path):
        with open(path) as fh:
            return ExperimentConfig.from_dict(json.load(fh))


def build_test_function(cfg, spec, rng):
    """Materialize cfg.function on the group."""
    fn = cfg.function
    kind = fn.get("kind", "random-step")
    if kind == "character":
        return testfuncs.character(int(fn["k"]), spec)
    if kind == "cylinder":
        return testfuncs.cylinder_indicator(
            int(fn["rank"]), int(fn.get("base", 0)), spec
        )
    if kind == "random-step":
        return testfuncs.random_step(spec, rng)
    if kind == "atom":
        return testfuncs.atom(int(fn["rank"]), int(fn.get("base", 0)), spec, rng)
    if kind == "custom":
        vals = np.array([complex(re, im) for re, im in fn["values"]])
        return StepFunction(spec.resolution, vals)
    raise ValueError(f"unknown test-function kind {kind!r}")


def build_grid_function(cfg):
    """Materialize cfg.function on the circle grid."""
    fn = cfg.function
    kind = fn.get("kind", "square-wave")
    G = cfg.grid_size
    if kind == "square-wave":
        return trig.square_wave(
            G,
            edge=float(fn.get("edge", math.pi / 2)),
            low=float(fn.get("low", 0.0)),
            high=float(fn.get("high", 1.0)),
        )
    if kind == "harmonic":
        freq = int(fn.get("freq", 1))
        x = trig.grid_nodes(G)
        return trig.GridFunction(np.exp(1j * freq * x), G)
    if kind == "custom":
        vals = np.array([complex(re, im) for re, im in fn["values"]])
        return trig.GridFunction(vals, G, jumps=fn.get("jumps", []))
    raise ValueError(f"unknown circle test-function kind {kind!r}")


# --- runners ----------------------------------------------------------------

def run_norm_convergence(cfg):
    """Trace of ||sigma_n f - f||_p over the schedule; exact cell averages."""
    if cfg.p < 1:
        raise ValueError("p must be >= 1")
    spec = cfg.group_spec()
    rng = np.random.default_rng(cfg.seed)
    f = build_test_function(cfg, spec, rng)
    ns = cfg.n_schedule(limit=spec.M[f.resolution])
    rows = []
    for n in ns:
        g = kernels.fejer_mean(f, n, spec)
        err = lp_norm(StepFunction(f.resolution, g.values - f.values), cfg.p)
        rows.append({"n": n, "error": err})
    errors = [r["error"] for r in rows]
    decreasing = all(a >= b - 1e-12 for a, b in zip(errors, errors[1:]))
    verdict = decreasing and errors[-1] <= cfg.threshold
    return _report(cfg, {"trace": rows, "decreasing": decreasing}, verdict)


def run_ae_probe(cfg):
    """Pointwise convergence traces at seeded probe points (or at jumps)."""
    rng = np.random.default_rng(cfg.seed)
    if cfg.m:
        spec = cfg.group_spec()
        f = build_test_function(cfg, spec, rng)
        size = spec.M[f.resolution]
        probes = sorted(rng.choice(size, size=min(cfg.probe_count, size), replace=False))
        ns = cfg.n_schedule(limit=size)
        traces = {}
        for n in ns:
            g = kernels.fejer_mean(f, n, spec)
            for j in probes:
                traces.setdefault(int(j), []).append(
                    [n, float(abs(g.values[j] - f.values[j]))]
                )
        final = {j: tr[-1][1] for j, tr in traces.items()}
    else:
        f = build_grid_function(cfg)
        ns = cfg.n_schedule(limit=cfg.grid_size // 8)
        probes, targets = _circle_probes(cfg, f, rng)
        traces = {}
        for n in ns:
            for i, (t0, target) in enumerate(zip(probes, targets)):
                val = trig.fejer_mean_T(f, n, t0)
                traces.setdefault(i, []).append([n, float(abs(val - target))])
        final = {i: tr[-1][1] for i, tr in traces.items()}
    below = sum(1 for v in final.values() if v <= cfg.threshold)
    results = {
        "probes": {str(k): v for k, v in traces.items()},
        "final_errors": {str(k): v for k, v in final.items()},
        "fraction_below_threshold": below / len(final),
    }
    return _report(cfg, results, below == len(final))


def _circle_probes(cfg, f, rng):
    """Probe points on the circle: annotated jumps (target L) plus random
    continuity nodes (target f(t0))."""
    probes, targets = [], []
    for loc, left, right in f.jumps:
        probes.append(loc)
        targets.append((left + right) / 2.0)
    nodes = trig.grid_nodes(f.grid_size)
    jump_locs = [loc for loc, _a, _b in f.jumps]
    extra = cfg.probe_count - len(probes)
    picked = 0
    while picked < extra:
        j = int(rng.integers(f.grid_size))
        if any(abs(nodes[j] - loc) < 0.1 for loc in jump_locs):
            continue
        probes.append(float(nodes[j]))
        targets.append(complex(f.samples[j]))
        picked += 1
    return probes, targets


def weak_type_q(f, n_max, spec):
    """Q(f) = sup_y y * mu{sigma* f > y} / ||f||_1 over the attained values."""
    norm1 = lp_norm(f, 1.0)
    if norm1 == 0.0:
        raise ValueError("degenerate test function with zero L1 norm")
    star = kernels.maximal_fejer(f, n_max, spec).values.real
    size = len(star)
    best = 0.0
    for v in np.unique(star):
        if v <= 0.0:
            continue
        count = int(np.sum(star >= v))
        best = max(best, v * count / size)
    return float(best / norm1)


def run_weak_type(cfg):
    """Empirical weak-type (1,1) constant over a seeded random-step corpus."""
    spec = cfg.group_spec()
    rng = np.random.default_rng(cfg.seed)
    n_max = cfg.n_max or spec.M[spec.resolution]
    qs = []
    for _ in range(cfg.corpus_size):
        f = testfuncs.random_step(spec, rng)
        qs.append(weak_type_q(f, n_max, spec))
    half = max(qs[: max(1, cfg.corpus_size // 2)])
    full = max(qs)
    results = {
        "per_function_q": qs,
        "max_q": full,
        "max_q_first_half": half,
        "doubling_change": (full - half) / half,
    }
    verdict = math.isfinite(full) and results["doubling_change"] <= 0.10
    return _report(cfg, results, verdict)


def atom_annihilation_report(cfg):
    """sigma_n f == 0 for n <= M_rank, exactly, for a corpus of atoms.

    The exact verdict comes from the integer spectral certificate
    (testfuncs.exact_spectral_zeros); the float pipeline residue is
    reported alongside.
    """
    spec = cfg.group_spec()
    rng = np.random.default_rng(cfg.seed)
    rank = int(cfg.function.get("rank", cfg.N or 4))
    rows = []
    all_exact = True
    for i in range(cfg.corpus_size):
        base = int(rng.integers(spec.M[spec.resolution]))
        f = testfuncs.atom(rank, base, spec, rng)
        exact = testfuncs.exact_spectral_zeros(f, spec, spec.M[rank])
        mean_dev = abs(integrate(f))
        resid = 0.0
        for n in (1, spec.M[rank] // 2, spec.M[rank]):
            if n >= 1:
                g = kernels.fejer_mean(f, n, spec)
                resid = max(resid, float(np.max(np.abs(g.values))))
        rows.append(
            {
                "atom": i,
                "base": base,
                "exact_zero": exact,
                "mean_deviation": mean_dev,
                "float_residual": resid,
            }
        )
        all_exact = all_exact and exact and mean_dev == 0.0
    return _report(cfg, {"rank": rank, "atoms": rows}, all_exact)


def run_kernel_suite(cfg):
    spec = cfg.group_spec()
    n_max = cfg.n_max or spec.M[spec.resolution]
    results = axioms.kernel_suite(spec, cfg.N, n_max)
    ok = (
        results["unit_integral_max_deviation"] <= axioms.TOL_EXACT
        and results["l1_sup"]["doubling_change"] < 0.01
        and results["dyadic_tail"]["strictly_decreasing"]
    )
    return _report(cfg, results, ok)


def run_axiom_check(cfg):
    """A1-A4 for the built-in families through one shared code path."""
    ns = cfg.n_schedule()
    if cfg.m:
        spec = cfg.group_spec()
        family = axioms.vilenkin_fejer_family(spec)
        ns = [n for n in ns if n <= spec.M[spec.resolution]]
        tol = axioms.TOL_EXACT
    else:
        family = axioms.trig_fejer_family(cfg.grid_size)
        ns = [n for n in ns if n < cfg.grid_size]
        tol = axioms.TOL_QUADRATURE
    results = axioms.axiom_suite(family, cfg.N or 3, ns, tol)
    ok = results["A1"]["pass"] and results["A2"]["verdict"] == "stabilized"
    return _report(cfg, results, ok)


def dump_kernel(cfg, out_dir=None):
    """Kernel (and envelope) traces as CSV files; returns the written paths."""
    out = _resolve_out_dir(cfg, out_dir)
    ns = cfg.n_schedule()
    paths = []
    if cfg.m:
        spec = cfg.group_spec()
        for n in ns:
            table = kernels.fejer(n, spec.resolution, spec)
            path = out / f"kernel_vilenkin_n{n}.csv"
            _write_csv(
                path,
                ["cell_index", "re", "im"],
                [[j, v.real, v.imag] for j, v in enumerate(table.values)],
            )
            paths.append(path)
    else:
        x = trig.grid_nodes(cfg.grid_size)
        for n in ns:
            raw = trig.fejer_kernel_T(n, x)
            env = trig.envelope_T(n, x)
            path = out / f"kernel_trig_n{n}.csv"
            _write_csv(
                path,
                ["x", "kernel", "kernel_normalized", "envelope"],
                [
                    [xv, kv, kv / trig.TWO_PI, ev]
                    for xv, kv, ev in zip(x, raw, env)
                ],
            )
            paths.append(path)
    return paths


RUNNERS = {
    "norm-convergence": run_norm_convergence,
    "ae-probe": run_ae_probe,
    "weak-type": run_weak_type,
    "atom-annihilation": atom_annihilation_report,
    "kernel-suite": run_kernel_suite,
    "axiom-check": run_axiom_check,
}


def run(cfg):
    try:
        runner = RUNNERS[cfg.kind]
    except KeyError:
        raise ValueError(f"unknown experiment kind {cfg.kind!r}") from None
    return runner(cfg)


# --- report persistence -----------------------------------------------------

def _report(cfg, results, verdict):
    return {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "results": results,
        "verdict": bool(verdict),
    }


def _resolve_out_dir(cfg, out_dir=None):
    path = Path(
        out_dir or os.environ.get(OUTPUT_DIR_ENV) or cfg.out_dir or "."
    )
    path.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return value


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


class _JSONEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)


def report_to_json(report):
    return json.dumps(report, sort_keys=True, indent=2, cls=_JSONEncoder)


def write_report(report, name, cfg=None, out_dir=None):
    """Persist a report as <name>.json (+ <name>_trace.csv when a trace
    table is present).  Returns the JSON path."""
    out = _resolve_out_dir(cfg or ExperimentConfig(kind="adhoc"), out_dir)
    json_path = out / f"{name}.json"
    with open(json_path, "w") as fh:
        fh.write(report_to_json(report))
        fh.write("\n")
    trace = report.get("results", {}).get("trace")
    if trace and isinstance(trace, list) and isinstance(trace[0], dict):
        keys = list(trace[0].keys())
        _write_csv(out / f"{name}_trace.csv", keys, [[r[k] for k in keys] for r in trace])
    return json_path
