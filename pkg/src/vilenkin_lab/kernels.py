"""Dirichlet and Fejér kernels, means, convolution and maximal operators on G_m.

Kernel conventions.
    D_n = sum_{k<n} psi_k (so D_0 = 0, D_1 = 1) and the Fejér kernel is
    taken in its spectral-multiplier form

        K_n = sum_{k<n} ((n - k)/n) psi_k  =  (1/n) sum_{j=1}^{n} D_j.

    This is the normalization under which int K_n dmu = 1 for every
    n >= 1, sigma_n(1) = 1, and K_{M_n} agrees with the closed three-branch
    form (value (M_n + 1)/2 on I_n).  The alternative average starting the
    partial-sum ladder at S_0 = 0, (1/n) sum_{j=0}^{n-1} D_j, shifts every
    multiplier by 1/n and breaks all three identities; it is kept available
    as `fejer_mean_zero_based` for side-by-side comparison but is not used
    anywhere else.

    Every kernel and mean has two independent constructions (definitional
    character sums vs spectral multipliers through the fast transform);
    the test suite keeps them permanently cross-checked.
"""

from __future__ import annotations

import math

import numpy as np

from .group import annulus_partition, digit_matrix, digits, zero_cylinder_mask
from .transform import (
    Spectrum,
    StepFunction,
    character_matrix,
    forward,
    integrate,
    inverse,
)

# Below this cell count, convolution runs as the direct double sum.
DIRECT_CONVOLUTION_LIMIT = 4096


def _check_n(n, N, spec, minimum=1):
    if not minimum <= n <= spec.M[N]:
        raise ValueError(f"kernel index {n} out of range [{minimum}, {spec.M[N]}]")


def fejer_multipliers(n, size):
    """Spectral weights of K_n: (n - k)/n for k < n, zero beyond."""
    w = np.zeros(size)
    top = min(n, size)
    w[:top] = (n - np.arange(top)) / n
    return w


def dirichlet(n, N, spec):
    """Dirichlet kernel D_n = sum_{k<n} psi_k as a resolution-N step function."""
    _check_n(n, N, spec, minimum=0)
    coeffs = np.zeros(spec.M[N], dtype=complex)
    coeffs[:n] = 1.0
    return inverse(Spectrum(N, coeffs), spec)


def dirichlet_naive(n, N, spec):
    """Direct character-sum construction of D_n (test oracle)."""
    _check_n(n, N, spec, minimum=0)
    Psi = character_matrix(spec, N)
    return StepFunction(N, Psi[:n].sum(axis=0))


def fejer(n, N, spec, method="multiplier"):
    """Fejér kernel K_n on resolution-N cells.

    method="multiplier": synthesis of the weights (n - k)/n.
    method="average":    (1/n) sum_{j=1}^{n} D_j with D_j built by direct
                         character summation — the independent slow path.
    """
    _check_n(n, N, spec)
    if method == "multiplier":
        coeffs = fejer_multipliers(n, spec.M[N]).astype(complex)
        return inverse(Spectrum(N, coeffs), spec)
    if method == "average":
        acc = np.zeros(spec.M[N], dtype=complex)
        for j in range(1, n + 1):
            acc += dirichlet_naive(j, N, spec).values
        return StepFunction(N, acc / n)
    raise ValueError(f"unknown method {method!r}")


def fejer_closed_at(n, x, spec, t=None):
    """Closed form of K_{M_n} at a point, via the three-branch case split.

    Branches: (M_n + 1)/2 on I_n; M_t / (1 - r_t(x)) when the first nonzero
    digit sits at position t < n and every other digit below n vanishes;
    0 otherwise.  `t` may be passed as the (checked) position of the first
    nonzero digit; by default it is derived from x.
    """
    if not 0 < n <= x.resolution:
        raise ValueError("level out of range")
    first = next((k for k, d in enumerate(x.digits) if d != 0), None)
    if t is not None and t != first:
        raise ValueError(f"t={t} is not the first nonzero digit position ({first})")
    if first is None or first >= n:
        return complex((spec.M[n] + 1) / 2)
    t = first
    if any(x.digits[j] != 0 for j in range(t + 1, n)):
        return 0j
    r = np.exp(2j * np.pi * x.digits[t] / spec.m[t])
    return spec.M[t] / (1 - r)


def fejer_closed_table(n, N, spec):
    """Closed form of K_{M_n} over all resolution-N cells, vectorized."""
    if not 0 < n <= N:
        raise ValueError("level out of range")
    D = digit_matrix(spec, N)
    size = spec.M[N]
    values = np.zeros(size, dtype=complex)
    below = D[:, :n]
    nonzero = below != 0
    count = nonzero.sum(axis=1)
    values[count == 0] = (spec.M[n] + 1) / 2
    single = count == 1
    if np.any(single):
        t = np.argmax(nonzero[single], axis=1)
        xt = below[single, t]
        mt = np.array(spec.m)[t]
        r = np.exp(2j * np.pi * xt / mt)
        values[single] = np.array(spec.M)[t] / (1 - r)
    return StepFunction(N, values)


def domination_rhs(n, N, spec):
    """Cellwise sum_{l=0}^{|n|} M_l |K_{M_l}|, the right side of the
    kernel-domination estimate n |K_n| <= c * RHS (K_{M_0} = K_1 = 1)."""
    _check_n(n, N, spec)
    order = max(l for l in range(N + 1) if spec.M[l] <= n)
    acc = np.full(spec.M[N], 0.0)
    acc += 1.0  # l = 0 term: M_0 |K_1| = 1
    for l in range(1, order + 1):
        acc += spec.M[l] * np.abs(fejer_closed_table(l, N, spec).values)
    return StepFunction(N, acc)


def domination_constant(n, N, spec):
    """Smallest empirical c with n |K_n| <= c * domination_rhs, cellwise."""
    lhs = n * np.abs(fejer(n, N, spec).values)
    rhs = domination_rhs(n, N, spec).values.real
    return float(np.max(lhs / rhs))


def partial_sum(f, n, spec):
    """S_n f: spectral truncation to the first n coefficients (S_0 f = 0)."""
    if not 0 <= n <= spec.M[f.resolution]:
        raise ValueError("partial-sum order out of range")
    s = forward(f, spec)
    coeffs = np.zeros_like(s.coeffs)
    coeffs[:n] = s.coeffs[:n]
    return inverse(Spectrum(f.resolution, coeffs), spec)


def fejer_mean(f, n, spec):
    """sigma_n f via the multipliers (n - k)/n; equals f * K_n."""
    _check_n(n, f.resolution, spec)
    s = forward(f, spec)
    coeffs = s.coeffs * fejer_multipliers(n, len(s.coeffs))
    return inverse(Spectrum(f.resolution, coeffs), spec)


def fejer_mean_averaged(f, n, spec):
    """sigma_n f as the literal average (1/n) sum_{k=1}^{n} S_k f."""
    _check_n(n, f.resolution, spec)
    acc = np.zeros_like(f.values)
    for k in range(1, n + 1):
        acc += partial_sum(f, k, spec).values
    return StepFunction(f.resolution, acc / n)


def fejer_mean_zero_based(f, n, spec):
    """(1/n) sum_{k=0}^{n-1} S_k f, the ladder starting at S_0 f = 0.

    Differs from fejer_mean by the 1/n-weighted term sigma_n f - this
    equals (1/n) S_n f; kept only for reporting the convention gap.
    """
    _check_n(n, f.resolution, spec)
    s = forward(f, spec)
    w = np.zeros(len(s.coeffs))
    top = min(n, len(s.coeffs))
    w[:top] = (n - 1 - np.arange(top)) / n
    coeffs = s.coeffs * w
    return inverse(Spectrum(f.resolution, coeffs), spec)


def convolve(f, g, spec):
    """(f * g)(x) = int f(x - t) g(t) dmu(t), exact over cells.

    Direct O(M_N^2) double sum below DIRECT_CONVOLUTION_LIMIT cells,
    transform-based (convolution theorem) above.
    """
    if f.resolution != g.resolution:
        raise ValueError("resolution mismatch")
    N = f.resolution
    size = spec.M[N]
    if size <= DIRECT_CONVOLUTION_LIMIT:
        return _convolve_direct(f, g, spec)
    fs = forward(f, spec)
    gs = forward(g, spec)
    return inverse(Spectrum(N, fs.coeffs * gs.coeffs), spec)


def _convolve_direct(f, g, spec):
    N = f.resolution
    size = spec.M[N]
    D = digit_matrix(spec, N)
    M = np.array(spec.M[:N], dtype=np.int64)
    m = np.array(spec.m[:N], dtype=np.int64)
    out = np.zeros(size, dtype=complex)
    for t in range(size):
        if g.values[t] == 0:
            continue
        shifted = (D - D[t]) % m  # digits of x - t, all x at once
        idx = shifted @ M
        out += f.values[idx] * g.values[t]
    return StepFunction(N, out / size)


def maximal_fejer(f, n_max, spec):
    """Cellwise sup over 1 <= n <= n_max of |sigma_n f| (real-valued)."""
    _check_n(n_max, f.resolution, spec)
    s = forward(f, spec)
    out = np.zeros(len(f.values))
    for n in range(1, n_max + 1):
        coeffs = s.coeffs * fejer_multipliers(n, len(s.coeffs))
        vals = inverse(Spectrum(f.resolution, coeffs), spec).values
        np.maximum(out, np.abs(vals), out=out)
    return StepFunction(f.resolution, out)


def restricted_maximal_kernel(N, n_max, spec, resolution=None):
    """Cellwise sup_{M_N < n <= n_max} |K_n|, restricted to the complement
    of I_N (zero on I_N itself)."""
    if resolution is None:
        resolution = spec.resolution
    if not spec.M[N] < n_max <= spec.M[resolution]:
        raise ValueError("n_max must satisfy M_N < n_max <= M_resolution")
    size = spec.M[resolution]
    out = np.zeros(size)
    for n in range(spec.M[N] + 1, n_max + 1):
        vals = fejer(n, resolution, spec).values
        np.maximum(out, np.abs(vals), out=out)
    out[zero_cylinder_mask(N, spec, resolution)] = 0.0
    return StepFunction(resolution, out)


# --- integral helpers -------------------------------------------------------

def kernel_l1(n, N, spec):
    """int |K_n| dmu."""
    return float(np.mean(np.abs(fejer(n, N, spec).values)))


def tail_integral(values, N, spec, resolution):
    """Integral of |values| over the complement of I_N."""
    mask = ~zero_cylinder_mask(N, spec, resolution)
    return float(math.fsum(np.abs(values)[mask]) / spec.M[resolution])


def annulus_integrals(values, N, spec, resolution):
    """Integral of |values| over each annulus I_N^{k,l}; keys are (k, l)."""
    parts = annulus_partition(N, spec, resolution)
    out = {}
    for kl, cells in parts.items():
        idx = np.array(cells.indices, dtype=np.int64)
        out[kl] = float(math.fsum(np.abs(values)[idx]) / spec.M[resolution])
    return out


def annulus_sups(values, N, spec, resolution):
    """Sup of |values| over each annulus I_N^{k,l}."""
    parts = annulus_partition(N, spec, resolution)
    out = {}
    for kl, cells in parts.items():
        idx = np.array(cells.indices, dtype=np.int64)
        out[kl] = float(np.max(np.abs(values)[idx])) if len(idx) else 0.0
    return out
