"""Approximate-identity axiom checks over abstract kernel families.

A KernelFamily bundles an evaluator n -> kernel values on a fixed
discretization (group cells or circle grid nodes), the integration weights
of that discretization, and the tail region "outside I_N" (the complement
of the rank-N zero cylinder on the group; |x| > 2^{-N} on the circle).

The four axioms:
  A1  unit integral,
  A2  uniformly bounded L1 norms,
  A3  vanishing tail integrals,
  A4  vanishing tail sups.

No limit can be observed at finite resolution, so every A3/A4 verdict is a
desk-scale claim: a decaying trace over a dyadic ladder of indices plus a
fitted power-law envelope, or explicit bounded-below evidence.  Reports
keep the raw traces so the verdicts stay auditable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels, trig
from .group import annulus_cells, point_from_index, unit_point, zero_cylinder_mask
from .transform import StepFunction

# Tolerance ladder: exact-arithmetic identities / transform round-trips /
# quadrature-backed quantities.
TOL_EXACT = 1e-12
TOL_TRANSFORM = 1e-10
TOL_QUADRATURE = 1e-8


@dataclass
class KernelFamily:
    """A kernel family {Phi_n} on a fixed discretized domain."""

    name: str
    domain: str  # "vilenkin" or "circle"
    evaluator: Callable[[int], np.ndarray]
    weights: np.ndarray  # integration weights, one per node/cell
    tail_mask: Callable[[int], np.ndarray]
    index_set: tuple = ()

    def values(self, n):
        return np.asarray(self.evaluator(n))

    def integral(self, n):
        return complex(np.sum(self.values(n) * self.weights))

    def l1(self, n):
        return float(np.sum(np.abs(self.values(n)) * self.weights))

    def tail_integral(self, n, N):
        mask = self.tail_mask(N)
        return float(np.sum(np.abs(self.values(n))[mask] * self.weights[mask]))

    def tail_sup(self, n, N):
        mask = self.tail_mask(N)
        vals = np.abs(self.values(n))[mask]
        return float(np.max(vals)) if vals.size else 0.0


def vilenkin_fejer_family(spec, resolution=None):
    """The Vilenkin-Fejér kernels K_n on resolution-level cells."""
    if resolution is None:
        resolution = spec.resolution
    size = spec.M[resolution]
    return KernelFamily(
        name="vilenkin-fejer",
        domain="vilenkin",
        evaluator=lambda n: kernels.fejer(n, resolution, spec).values,
        weights=np.full(size, 1.0 / size),
        tail_mask=lambda N: ~zero_cylinder_mask(N, spec, resolution),
        index_set=tuple(range(1, size + 1)),
    )


def vilenkin_dirichlet_family(spec, resolution=None):
    """Dirichlet kernels D_n — the built-in A2 violator."""
    if resolution is None:
        resolution = spec.resolution
    size = spec.M[resolution]
    return KernelFamily(
        name="vilenkin-dirichlet",
        domain="vilenkin",
        evaluator=lambda n: kernels.dirichlet(n, resolution, spec).values,
        weights=np.full(size, 1.0 / size),
        tail_mask=lambda N: ~zero_cylinder_mask(N, spec, resolution),
        index_set=tuple(range(1, size + 1)),
    )


def trig_fejer_family(G=2 ** 14):
    """The system-normalized trigonometric Fejér kernels K_n / (2 pi)."""
    nodes = trig.grid_nodes(G)
    return KernelFamily(
        name="trig-fejer",
        domain="circle",
        evaluator=lambda n: trig.fejer_kernel_T_normalized(n, nodes),
        weights=np.full(G, trig.TWO_PI / G),
        tail_mask=lambda N: np.abs(nodes) > 0.5 ** N,
        index_set=(),
    )


@dataclass
class AxiomReport:
    """Per-axiom verdict with the raw numeric trace behind it."""

    family: str
    axiom: str
    trace: list  # [[n, value], ...]
    fitted: dict = field(default_factory=dict)
    verdict: str = ""
    tolerance: float = float("nan")

    def to_json(self):
        return json.dumps(
            {
                "family": self.family,
                "axiom": self.axiom,
                "trace": self.trace,
                "fitted": self.fitted,
                "verdict": self.verdict,
                "tolerance": self.tolerance,
            },
            sort_keys=True,
        )


def _fit_power_law(ns, vals):
    """Fit value ~ C * n^slope in log-log space; returns {} on degenerate data."""
    ns = np.asarray(ns, dtype=float)
    vals = np.asarray(vals, dtype=float)
    ok = vals > 0
    if ok.sum() < 2:
        return {}
    slope, intercept = np.polyfit(np.log(ns[ok]), np.log(vals[ok]), 1)
    return {"slope": float(slope), "C": float(math.exp(intercept))}


def _decay_verdict(trace, fitted):
    """Desk-scale classification of a nonnegative trace over a dyadic ladder."""
    vals = [v for _, v in trace]
    first, last = vals[0], vals[-1]
    if first == 0.0 or last <= first * 0.1:
        return "decaying"
    if min(vals) >= 0.25 * max(vals):
        return "bounded-below"
    if fitted.get("slope", 0.0) < -0.2:
        return "decaying"
    return "inconclusive"


def check_A1(family, n):
    """|int Phi_n - 1|."""
    return abs(family.integral(n) - 1.0)


def check_A2(family, n_set):
    """Max L1 norm over n_set, plus a dyadic stabilization flag.

    The flag compares the running sup over the first half of the (sorted)
    n_set with the sup over all of it: stabilized means < 1% growth.
    """
    ns = sorted(n_set)
    l1s = [family.l1(n) for n in ns]
    half_sup = max(l1s[: max(1, len(l1s) // 2)])
    full_sup = max(l1s)
    stabilized = full_sup <= half_sup * 1.01
    report = AxiomReport(
        family=family.name,
        axiom="A2",
        trace=[[int(n), v] for n, v in zip(ns, l1s)],
        fitted={"sup": full_sup, "half_sup": half_sup},
        verdict="stabilized" if stabilized else "growing",
    )
    return full_sup, report


def check_A3(family, N, n_set):
    """Tail-integral trace over n_set with a fitted decay envelope."""
    ns = sorted(n_set)
    vals = [family.tail_integral(n, N) for n in ns]
    fitted = _fit_power_law(ns, vals)
    trace = [[int(n), v] for n, v in zip(ns, vals)]
    return AxiomReport(
        family=family.name,
        axiom="A3",
        trace=trace,
        fitted=fitted,
        verdict=_decay_verdict(trace, fitted),
    )


def check_A4(family, N, n_set):
    """Tail-sup trace over n_set: fitted decay or bounded-below evidence."""
    ns = sorted(n_set)
    vals = [family.tail_sup(n, N) for n in ns]
    fitted = _fit_power_law(ns, vals)
    trace = [[int(n), v] for n, v in zip(ns, vals)]
    report = AxiomReport(
        family=family.name,
        axiom="A4",
        trace=trace,
        fitted=fitted,
        verdict=_decay_verdict(trace, fitted),
    )
    if report.verdict == "bounded-below":
        report.fitted["lower_bound"] = float(min(vals))
    return report


def axiom_suite(family, N, n_set, a1_tol):
    """Run A1-A4 through the same code path for any family."""
    ns = sorted(n_set)
    a1 = max(check_A1(family, n) for n in ns)
    sup, a2 = check_A2(family, ns)
    a3 = check_A3(family, N, ns)
    a4 = check_A4(family, N, ns)
    return {
        "family": family.name,
        "N": int(N),
        "n_set": [int(n) for n in ns],
        "A1": {"max_deviation": a1, "tolerance": a1_tol, "pass": a1 <= a1_tol},
        "A2": {"sup": sup, "verdict": a2.verdict, "trace": a2.trace},
        "A3": {"verdict": a3.verdict, "trace": a3.trace, "fitted": a3.fitted},
        "A4": {"verdict": a4.verdict, "trace": a4.trace, "fitted": a4.fitted},
    }


# --- counterexample probes at cell scale ------------------------------------

def group_metric(x, spec):
    """Normalized Vilenkin metric |x| = sum_j x_j / M_{j+1}."""
    return sum(d / spec.M[j + 1] for j, d in enumerate(x.digits))


def a4_failure_probe(spec, k_set, resolution=None, n_max=None):
    """Probe the failure of (A4) for Vilenkin-Fejér kernels.

    Tabulates |K_{M_k}(e_0)| against the closed value 1 / (2 sin(pi/m_0)),
    evaluates |K_{M_k}| on the shell I_{k-1} \\ I_k (points whose first
    nonzero digit sits at position k-1), and fits the lower-envelope claim
    sup_n |K_n(x)| >= (2 pi lambda |x|)^{-1} under the metric above.
    """
    if resolution is None:
        resolution = spec.resolution
    e0 = unit_point(0, spec, resolution)
    target = 1.0 / (2.0 * math.sin(math.pi / spec.m[0]))
    rows = []
    for k in sorted(k_set):
        if k > resolution:
            raise ValueError(f"M_{k} exceeds the working resolution")
        table = kernels.fejer(spec.M[k], resolution, spec)
        value = abs(table.values[1])  # cell index 1 is e_0
        # |K_{M_k}| on I_{k-1} \ I_k: first k-1 digits zero, digit k-1 nonzero.
        shell = kernels.fejer_closed_table(k, resolution, spec).values
        cells = annulus_cells(k, k - 1, k, spec, resolution) if k >= 1 else None
        shell_vals = np.abs(shell[np.array(cells.indices)]) if cells else np.array([])
        rows.append(
            {
                "k": int(k),
                "value_at_e0": float(value),
                "target": target,
                "deviation": float(abs(value - target)),
                "shell_min": float(shell_vals.min()) if shell_vals.size else None,
                "shell_claim": spec.M[k] / (2.0 * math.pi),
            }
        )
    out = {
        "m0": spec.m[0],
        "target": target,
        "rows": rows,
        "note": "shell values are taken on I_{k-1} \\ I_k",
    }
    if n_max is not None:
        out["lower_envelope"] = _lower_envelope_fit(spec, resolution, n_max)
    return out


def _lower_envelope_fit(spec, resolution, n_max):
    """Fitted constant in sup_{n<=n_max} |K_n(x)| * 2 pi lambda |x| >= const."""
    size = spec.M[resolution]
    sup = np.zeros(size)
    for n in range(1, n_max + 1):
        vals = kernels.fejer(n, resolution, spec).values
        np.maximum(sup, np.abs(vals), out=sup)
    ratios = []
    for j in range(1, size):
        x = point_from_index(j, spec, resolution)
        ratios.append(sup[j] * 2.0 * math.pi * spec.lam * group_metric(x, spec))
    return {
        "n_max": int(n_max),
        "min_ratio": float(min(ratios)),
        "claim_holds": bool(min(ratios) >= 1.0),
    }


# --- consolidated kernel-estimate suite -------------------------------------

def kernel_suite(spec, N, n_max, resolution=None):
    """One consolidated report over the Vilenkin kernel estimates.

    Covers: the unit integral of every K_n, the bounded running sup of
    L1 norms with doubling stabilization, the vanishing tail trace at
    n = M_j (with the decay envelope
    (j-N) / 2^{j-N} fitted), and the restricted maximal kernel integral
    over the complement of I_N with per-annulus sups and a single fitted
    constant against M_l M_k / M_N.
    """
    if resolution is None:
        resolution = spec.resolution
    if not spec.M[N] < n_max <= spec.M[resolution]:
        raise ValueError("need M_N < n_max <= M_resolution")

    size = spec.M[resolution]
    # Single sweep: all kernels up to n_max.
    unit_dev = 0.0
    l1s = []
    abs_tables_max = np.zeros(size)
    for n in range(1, n_max + 1):
        vals = kernels.fejer(n, resolution, spec).values
        unit_dev = max(unit_dev, abs(complex(np.mean(vals)) - 1.0))
        l1s.append(float(np.mean(np.abs(vals))))
        if n > spec.M[N]:
            np.maximum(abs_tables_max, np.abs(vals), out=abs_tables_max)

    # l1_sup: running sup at dyadic checkpoints.
    checkpoints = []
    n = 2
    while n <= n_max:
        checkpoints.append([n, max(l1s[:n])])
        n *= 2
    if checkpoints and checkpoints[-1][0] != n_max:
        checkpoints.append([n_max, max(l1s)])
    half = max(l1s[: max(1, n_max // 2)])
    full = max(l1s)
    l1_sup = {
        "sup": full,
        "trace": checkpoints,
        "doubling_change": (full - half) / half if half else float("inf"),
    }

    # dyadic_tail: tail integrals at n = M_j.
    dyadic_tail_trace = []
    for j in range(N + 1, resolution + 1):
        if spec.M[j] > n_max:
            break
        vals = kernels.fejer_closed_table(j, resolution, spec).values
        dyadic_tail_trace.append([j, kernels.tail_integral(vals, N, spec, resolution)])
    ratios = [
        v / ((j - N) / 2.0 ** (j - N)) for j, v in dyadic_tail_trace if j > N
    ]
    fitted_c = float(np.exp(np.mean(np.log(ratios)))) if ratios else float("nan")
    dyadic_tail = {
        "trace": dyadic_tail_trace,
        "strictly_decreasing": all(
            a[1] > b[1] for a, b in zip(dyadic_tail_trace, dyadic_tail_trace[1:])
        ),
        "envelope": "(j-N)/2^(j-N)",
        "fitted_constant": fitted_c,
        "band_factor": (
            max(max(r / fitted_c for r in ratios), max(fitted_c / r for r in ratios))
            if ratios
            else float("nan")
        ),
    }

    # Restricted maximal kernel on the complement of I_N.
    mask_tail = ~zero_cylinder_mask(N, spec, resolution)
    restricted = abs_tables_max.copy()
    restricted[~mask_tail] = 0.0
    total = float(math.fsum(restricted[mask_tail]) / size)
    per_annulus_int = kernels.annulus_integrals(restricted, N, spec, resolution)
    per_annulus_sup = kernels.annulus_sups(restricted, N, spec, resolution)
    ratios_annuli = {
        kl: per_annulus_sup[kl] / (spec.M[kl[1]] * spec.M[kl[0]] / spec.M[N])
        for kl in per_annulus_sup
    }
    fitted = max(ratios_annuli.values())
    partition_gap = abs(math.fsum(per_annulus_int.values()) - total)
    maximal = {
        "n_max": int(n_max),
        "integral": total,
        "per_annulus_integral": {f"{k},{l}": v for (k, l), v in per_annulus_int.items()},
        "per_annulus_sup": {f"{k},{l}": v for (k, l), v in per_annulus_sup.items()},
        "per_annulus_ratio": {f"{k},{l}": v for (k, l), v in ratios_annuli.items()},
        "fitted_c": fitted,
        "partition_gap": partition_gap,
    }

    return {
        "m": list(spec.m),
        "resolution": int(resolution),
        "N": int(N),
        "n_max": int(n_max),
        "unit_integral_max_deviation": float(unit_dev),
        "l1_sup": l1_sup,
        "dyadic_tail": dyadic_tail,
        "restricted_maximal": maximal,
    }
