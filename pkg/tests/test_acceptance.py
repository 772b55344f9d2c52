"""Acceptance gate: one numbered pass/fail line per criterion.

Run with `pytest -v tests/test_acceptance.py` (add -s to see the lines as
they print).  Tolerances: 1e-12 for exact identities, 1e-10 for transform
round-trips, 1e-8 for quadrature.
"""

import math
import time

import numpy as np
import pytest

from vilenkin_lab.axioms import (
    check_A4,
    a4_failure_probe,
    trig_fejer_family,
    vilenkin_fejer_family,
)
from vilenkin_lab.experiments import (
    ExperimentConfig,
    dump_kernel,
    report_to_json,
    run,
    weak_type_q,
    write_report,
)
from vilenkin_lab.group import build_spec, unit_point, zero_cylinder_mask
from vilenkin_lab.kernels import (
    annulus_sups,
    fejer,
    fejer_closed_at,
    fejer_closed_table,
    fejer_mean,
    kernel_l1,
    restricted_maximal_kernel,
    tail_integral,
)
from vilenkin_lab.testfuncs import atom, character, cylinder_indicator, exact_spectral_zeros, random_step
from vilenkin_lab.transform import (
    StepFunction,
    character_matrix,
    forward,
    integrate,
    lp_norm,
    naive_forward,
)
from vilenkin_lab.trig import fejer_kernel_T_normalized, envelope_T, grid_nodes, square_wave, fejer_mean_T, tail_sup_T


def _criterion(num, label, ok):
    print(f"criterion {num:02d} [{label}]: {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({label}) failed"


def test_criterion_01_orthonormality():
    spec = build_spec([2, 3, 4, 2, 3])
    character_matrix.cache_clear()
    t0 = time.perf_counter()
    Psi = character_matrix(spec)
    gram = Psi.conj() @ Psi.T / spec.size
    dev = float(np.max(np.abs(gram - np.eye(spec.size))))
    elapsed = time.perf_counter() - t0
    _criterion(1, "orthonormality", dev <= 1e-12 and elapsed < 1.0)


def test_criterion_02_fast_transform():
    spec = build_spec([2, 3, 4, 2, 3])
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        vals = rng.standard_normal(144) + 1j * rng.standard_normal(144)
        f = StepFunction(5, vals)
        gap = np.max(np.abs(forward(f, spec).coeffs - naive_forward(f, spec).coeffs))
        worst = max(worst, float(gap))
    big = build_spec([3], 10)
    vals = np.random.default_rng(0).standard_normal(big.size) + 0j
    t0 = time.perf_counter()
    forward(StepFunction(10, vals), big)
    elapsed = time.perf_counter() - t0
    _criterion(2, "fast transform vs naive oracle", worst <= 1e-12 and elapsed < 1.0)


def test_criterion_03_closed_form_kernel():
    ok = True
    for m, L in [([2, 2, 2, 2, 2, 2], 6), ([2, 3, 4, 2], 4)]:
        spec = build_spec(m, L)
        for n in range(1, L + 1):
            closed = fejer_closed_table(n, L, spec).values
            definitional = fejer(spec.M[n], L, spec, method="average").values
            ok = ok and float(np.max(np.abs(closed - definitional))) <= 1e-10
    _criterion(3, "closed-form kernel at M_n", ok)


def test_criterion_04_unit_integral():
    spec = build_spec([2], 6)
    worst = max(
        abs(integrate(fejer(n, 6, spec)) - 1.0) for n in range(2, 65)
    )
    _criterion(4, "kernel unit integral", worst <= 1e-12)


def test_criterion_05_l1_sup_stabilizes():
    spec = build_spec([2], 10)
    sups = {}
    for n_max in (512, 1024):
        sups[n_max] = max(kernel_l1(n, 10, spec) for n in range(1, n_max + 1))
    change = abs(sups[1024] - sups[512]) / sups[512]
    print(f"  stabilized L1 sup: {sups[1024]!r} (change {change:.4%})")
    _criterion(5, "L1 sup stabilization", change < 0.01)


def test_criterion_06_dyadic_trace_envelope():
    spec = build_spec([2], 9)
    N = 3
    traces = {}
    for j in range(4, 10):
        vals = np.abs(fejer_closed_table(j, 9, spec).values)
        traces[j] = tail_integral(vals, N, spec, 9)
    vals = [traces[j] for j in range(4, 10)]
    decreasing = all(a > b for a, b in zip(vals, vals[1:]))
    ratios = [traces[j] / ((j - N) / 2.0 ** (j - N)) for j in range(4, 10)]
    fitted = math.exp(sum(math.log(r) for r in ratios) / len(ratios))
    band = max(max(r / fitted for r in ratios), max(fitted / r for r in ratios))
    alt = [traces[j] / ((j - N) / 2.0 ** ((j - N) / 2.0)) for j in range(4, 10)]
    alt_fit = math.exp(sum(math.log(r) for r in alt) / len(alt))
    alt_band = max(max(r / alt_fit for r in alt), max(alt_fit / r for r in alt))
    print(f"  band factor {band:.3f}; square-root-exponent variant {alt_band:.3f}")
    _criterion(6, "dyadic tail trace envelope", decreasing and band < 4.0)


def test_criterion_07_restricted_maximal():
    spec = build_spec([2], 10)
    N = 3
    integrals, sups = {}, {}
    for n_max in (512, 1024):
        table = restricted_maximal_kernel(N, n_max, spec)
        integrals[n_max] = tail_integral(table.values, N, spec, 10)
        sups[n_max] = annulus_sups(table.values, N, spec, 10)
    change = abs(integrals[1024] - integrals[512]) / integrals[512]
    fitted_c = max(
        sups[512][key] / (spec.M[key[1]] * spec.M[key[0]] / spec.M[N])
        for key in sups[512]
    )
    bounded = all(
        sups[1024][key] <= fitted_c * spec.M[key[1]] * spec.M[key[0]] / spec.M[N] + 1e-12
        for key in sups[1024]
    )
    print(f"  integral {integrals[1024]!r} (change {change:.4%}), fitted c {fitted_c:.4f}")
    _criterion(7, "restricted maximal kernel", change < 0.05 and bounded)


def test_criterion_08_probe_and_a4_contrast():
    ok = True
    for m0 in (2, 3, 4):
        spec = build_spec([m0] + [2] * 7, 8)
        probe = a4_failure_probe(spec, range(1, 9))
        ok = ok and all(row["deviation"] <= 1e-12 for row in probe["rows"])
        if m0 == 2:
            ok = ok and all(row["value_at_e0"] >= 0.5 - 1e-12 for row in probe["rows"])
    walsh = build_spec([2], 8)
    rep = check_A4(vilenkin_fejer_family(walsh), 3, [walsh.M[j] for j in range(4, 9)])
    ok = ok and min(v for _, v in rep.trace) >= 0.4
    trig_tail = tail_sup_T(4096, 1.0 / 8.0, 2 ** 17)
    print(f"  trig tail sup at n=4096, eps=1/8: {trig_tail:.6f}")
    _criterion(8, "probe value and A4 contrast", ok and trig_tail < 0.01)


def test_criterion_09_trig_envelope():
    x = grid_nodes(10 ** 5)
    violations = 0
    for n in range(1, 513):
        vals = fejer_kernel_T_normalized(n, x)
        violations += int(np.sum((vals < 0) | (vals > envelope_T(n, x) + 1e-15)))
    _criterion(9, "trig kernel envelope", violations == 0)


def test_criterion_10_norm_convergence():
    spec = build_spec([2], 6)
    ok = True
    for k, p in [(3, 1.0), (3, 2.0), (7, 1.5)]:
        f = character(k, spec)
        for n in (k + 1, 16, 64):
            g = fejer_mean(f, n, spec)
            err = lp_norm(StepFunction(6, g.values - f.values), p)
            ok = ok and abs(err - k / n) <= 1e-12
    f = cylinder_indicator(2, 0, spec)
    errs = []
    for j in range(1, 7):
        g = fejer_mean(f, spec.M[j], spec)
        errs.append(lp_norm(StepFunction(6, g.values - f.values), 1.0))
    ok = ok and all(a >= b for a, b in zip(errs, errs[1:]))
    _criterion(10, "norm convergence", ok)


def test_criterion_11_jump_midpoint():
    f = square_wave(2 ** 14, edge=math.pi / 2, low=0.0, high=1.0)
    loc, left, right = f.jumps[0]
    L = (left + right) / 2.0
    err = abs(fejer_mean_T(f, 1000, loc) - L)
    print(f"  jump error at n=1000: {err:.2e}")
    _criterion(11, "square-wave jump midpoint", err < 0.01)


def test_criterion_12_atom_annihilation():
    spec = build_spec([2], 6)
    rng = np.random.default_rng(2024)
    ok = True
    for _ in range(20):
        base = int(rng.integers(64))
        f = atom(4, base, spec, rng)
        ok = ok and integrate(f) == 0
        ok = ok and exact_spectral_zeros(f, spec, spec.M[4])
    _criterion(12, "atom annihilation (exact)", ok)


def test_criterion_13_weak_type():
    spec = build_spec([2], 6)
    rng = np.random.default_rng(99)
    qs = []
    for _ in range(100):
        f = random_step(spec, rng)
        qs.append(weak_type_q(f, 64, spec))
    half, full = max(qs[:50]), max(qs)
    finite = math.isfinite(full)
    f = random_step(spec, np.random.default_rng(7))
    g = StepFunction(6, 2.0 * f.values)
    scaling_gap = abs(weak_type_q(g, 64, spec) - weak_type_q(f, 64, spec))
    change = (full - half) / half
    print(f"  max Q {full!r}, corpus-doubling change {change:.4%}")
    _criterion(
        13, "weak-type constant", finite and scaling_gap <= 1e-12 and change < 0.10
    )


def test_criterion_14_determinism(tmp_path):
    cfg = ExperimentConfig(
        kind="weak-type", m=[2], resolution=6, n_max=64, corpus_size=10, seed=5
    )
    p1 = write_report(run(cfg), "det", out_dir=tmp_path / "a")
    p2 = write_report(run(cfg), "det", out_dir=tmp_path / "b")
    ok = p1.read_bytes() == p2.read_bytes()
    dump_cfg = ExperimentConfig(kind="kernel-dump", m=[2], resolution=4, schedule=[6])
    (c1,) = dump_kernel(dump_cfg, out_dir=tmp_path / "a")
    (c2,) = dump_kernel(dump_cfg, out_dir=tmp_path / "b")
    ok = ok and c1.read_bytes() == c2.read_bytes()
    norm_cfg = ExperimentConfig(
        kind="norm-convergence",
        m=[2],
        resolution=6,
        function={"kind": "random-step"},
        schedule=[8, 32, 64],
        seed=17,
        threshold=10.0,
    )
    ok = ok and report_to_json(run(norm_cfg)) == report_to_json(run(norm_cfg))
    _criterion(14, "byte-identical reruns", ok)
