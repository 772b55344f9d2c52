"""The test-function corpus for convergence and weak-type experiments.

Atoms deserve a note: an atom is an integer-valued, mean-zero function
supported on one rank-r cylinder.  Integer values make the zero mean exact
in floating point (small-integer sums never round), which in turn lets
`exact_spectral_zeros` certify hat f(k) = 0 for all k below the cylinder
scale by pure integer bookkeeping — no tolerance anywhere.
"""

from __future__ import annotations

import numpy as np

from .group import cylinder, digit_matrix, point_from_index
from .transform import StepFunction, character_matrix


def character(k, spec, resolution=None):
    """f = psi_k sampled on cells."""
    if resolution is None:
        resolution = spec.resolution
    return StepFunction(resolution, character_matrix(spec, resolution)[k].copy())


def cylinder_indicator(rank, base_index, spec, resolution=None):
    """Indicator of the rank-`rank` cylinder containing cell base_index."""
    if resolution is None:
        resolution = spec.resolution
    base = point_from_index(base_index, spec, resolution)
    cells = cylinder(rank, base, spec, resolution)
    vals = np.zeros(spec.M[resolution], dtype=complex)
    vals[np.array(cells.indices, dtype=np.int64)] = 1.0
    return StepFunction(resolution, vals)


def random_step(spec, rng, resolution=None):
    """Real random step function, iid uniform values in [-1, 1] per cell."""
    if resolution is None:
        resolution = spec.resolution
    vals = rng.uniform(-1.0, 1.0, size=spec.M[resolution]).astype(complex)
    return StepFunction(resolution, vals)


def atom(rank, base_index, spec, rng, resolution=None, amplitude=8):
    """Integer-valued mean-zero function supported on one rank-r cylinder.

    Raw integer draws v_j in [-amplitude, amplitude] on the support are
    recentered as count * v_j - sum(v), so the cell sum is exactly zero in
    integer (hence float) arithmetic.
    """
    if resolution is None:
        resolution = spec.resolution
    base = point_from_index(base_index, spec, resolution)
    cells = cylinder(rank, base, spec, resolution)
    idx = np.array(cells.indices, dtype=np.int64)
    count = len(idx)
    if count < 2:
        raise ValueError("atom support must contain at least two cells")
    raw = rng.integers(-amplitude, amplitude + 1, size=count)
    if np.all(raw == raw[0]):
        raw[0] += 1  # avoid the identically-zero atom
    centered = count * raw - raw.sum()
    vals = np.zeros(spec.M[resolution], dtype=complex)
    vals[idx] = centered.astype(float)
    return StepFunction(resolution, vals)


def exact_spectral_zeros(f, spec, k_max):
    """Certify hat f(k) == 0 exactly for all k < k_max, by integer sums.

    Works for integer-valued f: M_N * hat f(k) is the element
    sum_j f_j zeta^{-p(k,j)} of Z[zeta_{M_N}]; bucketing the integer values
    by phase numerator and finding every bucket sum equal to zero proves
    the coefficient vanishes with no floating-point step at all.  Returns
    True only when the certificate succeeds for every k < k_max (it is a
    sufficient condition, not a necessary one).
    """
    N = f.resolution
    MN = spec.M[N]
    vals = f.values.real
    ivals = np.rint(vals).astype(np.int64)
    if np.any(f.values.imag != 0.0) or np.any(ivals != vals):
        return False
    support = np.flatnonzero(ivals)
    if support.size == 0:
        return True
    D = digit_matrix(spec, N)[support]
    w = np.array([MN // spec.m[k] for k in range(N)], dtype=np.int64)
    for k in range(k_max):
        kd = np.array(
            [(k // spec.M[t]) % spec.m[t] for t in range(N)], dtype=np.int64
        )
        phases = (D * (kd * w)).sum(axis=1) % MN
        sums = np.bincount(phases, weights=ivals[support], minlength=MN)
        if np.any(sums != 0.0):
            return False
    return True
