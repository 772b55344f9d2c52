"""Trigonometric Fejér kernel, its envelope, and Fejér means of grid functions.

Normalization.
    The circle carries the orthonormal system {(1/2pi) e^{inx}} on
    [-pi, pi].  Two kernel scalings appear:

      * fejer_kernel_T(n, x) = (1/n) (sin(nx/2) / sin(x/2))^2, the raw
        closed form, with fejer_kernel_T(n, 0) = n;
      * the system-normalized kernel fejer_kernel_T / (2 pi), which is the
        one the envelope min(n, pi / (n x^2)) actually dominates and the
        one the approximate-identity machinery consumes (so that the unit
        integral reads  int K dx / (2 pi) = 1  as well as
        int (K / 2 pi) dx = 1).

    The raw closed form satisfies K(pi) = 1/n for odd n, which already
    exceeds pi/(n pi^2); only the normalized kernel obeys the envelope,
    with a uniform factor >= 2 to spare.

Quadrature is the periodic trapezoid rule on a uniform grid of G nodes
x_j = -pi + 2 pi j / G; it is exact for trigonometric polynomials of
degree < G, so Fejér means of band-limited data carry only rounding error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass
class GridFunction:
    """Uniform samples of a 2 pi periodic function on [-pi, pi).

    jumps: optional list of (location, left_limit, right_limit) records for
    probe points where the sampled function is discontinuous.
    """

    samples: np.ndarray
    grid_size: int
    jumps: list = field(default_factory=list)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.grid_size < 2 or len(self.samples) != self.grid_size:
            raise ValueError("samples must hold grid_size >= 2 values")
        for loc, _left, _right in self.jumps:
            if not -math.pi <= loc < math.pi:
                raise ValueError("jump annotations must lie in [-pi, pi)")


def grid_nodes(G):
    """The nodes x_j = -pi + 2 pi j / G."""
    return -math.pi + TWO_PI * np.arange(G) / G


def sample_grid(func, G, jumps=None):
    """GridFunction from a callable evaluated at the nodes."""
    x = grid_nodes(G)
    return GridFunction(np.asarray([func(v) for v in x]), G, jumps or [])


def square_wave(G, edge=math.pi / 2, low=0.0, high=1.0):
    """Square wave: high on (0, edge), low on the rest of the circle.

    Nodes landing exactly on a jump take the midpoint value.  Jump
    annotations are attached at 0 and at edge.
    """
    if not 0 < edge < math.pi:
        raise ValueError("edge must lie in (0, pi)")
    x = grid_nodes(G)
    vals = np.where((x > 0) & (x < edge), high, low).astype(complex)
    mid = (low + high) / 2.0
    vals[np.isclose(x, 0.0)] = mid
    vals[np.isclose(x, edge)] = mid
    return GridFunction(vals, G, jumps=[(0.0, low, high), (edge, high, low)])


def fejer_kernel_T(n, x):
    """Raw trigonometric Fejér kernel (1/n)(sin(nx/2)/sin(x/2))^2.

    Removable singularities go through sinc, so x = 0 returns exactly n.
    """
    if n < 1:
        raise ValueError("kernel index must be >= 1")
    u = np.asarray(x, dtype=float) / 2.0
    ratio = np.sinc(n * u / math.pi) / np.sinc(u / math.pi)
    out = n * ratio * ratio
    if np.ndim(x) == 0:
        return float(out)
    return out


def fejer_kernel_T_normalized(n, x):
    """The kernel of the system {(1/2pi) e^{inx}}: fejer_kernel_T / (2 pi)."""
    return fejer_kernel_T(n, x) / TWO_PI


def envelope_T(n, x):
    """Upper envelope min(n, pi / (n x^2)), with value n at x = 0.

    Dominates the normalized kernel fejer_kernel_T(n, x) / (2 pi) at every
    point of [-pi, pi]; the raw kernel exceeds it near |x| = pi.
    """
    if n < 1:
        raise ValueError("kernel index must be >= 1")
    xa = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        bound = np.where(xa == 0.0, np.inf, math.pi / (n * xa * xa))
    out = np.minimum(float(n), bound)
    if np.ndim(x) == 0:
        return float(out)
    return out


def fejer_mean_T(f, n, t0):
    """sigma_n f(t0) = (1/2pi) int f(t0 - t) K_n(t) dt by periodic trapezoid.

    t0 is snapped to the nearest grid node.  The aliasing guard requires
    n <= G/8 so that the kernel is well resolved by the grid.
    """
    G = f.grid_size
    if n < 1:
        raise ValueError("mean order must be >= 1")
    if n > G // 8:
        raise ValueError(f"order n={n} too large for grid G={G} (need n <= G/8)")
    j0 = int(round((t0 + math.pi) * G / TWO_PI)) % G
    j = np.arange(G)
    shifted = f.samples[(j0 - j + G // 2) % G]  # f at t0 - x_j
    kernel = fejer_kernel_T(n, grid_nodes(G))
    return complex(np.sum(shifted * kernel) / G)


def kernel_integral_T(n, G):
    """(1/2pi) int K_n dx by periodic trapezoid (exact for n - 1 < G)."""
    return float(np.sum(fejer_kernel_T(n, grid_nodes(G))) / G)


def tail_integral_T(n, eps, G):
    """(1/2pi) int_{eps <= |x| <= pi} K_n dx on the grid."""
    x = grid_nodes(G)
    mask = np.abs(x) >= eps
    return float(np.sum(fejer_kernel_T(n, x)[mask]) / G)


def tail_sup_T(n, eps, G, normalized=True):
    """sup over grid nodes with |x| >= eps of the (normalized) kernel."""
    x = grid_nodes(G)
    mask = np.abs(x) >= eps
    vals = fejer_kernel_T(n, x)[mask]
    sup = float(np.max(vals))
    return sup / TWO_PI if normalized else sup


def tail_integral_envelope_bound(n, eps):
    """Analytic envelope bound for the tail integral:
    (1/2pi) int_{eps<=|x|<=pi} pi/(n x^2) dx = (1/eps - 1/pi) / n."""
    return (1.0 / eps - 1.0 / math.pi) / n


def tail_report(eps, n_list, G=2 ** 14):
    """Tabulate unit integral, tail integral and tail sup per kernel index.

    Rows: n, total integral (1/2pi) int K_n, tail integral over
    [-pi,pi] \\ [-eps,eps], its analytic envelope bound, the tail sup of the
    normalized kernel, and the envelope sup bound pi/(n eps^2).
    """
    if not 0 < eps < math.pi:
        raise ValueError("eps must lie in (0, pi)")
    rows = []
    for n in n_list:
        rows.append(
            {
                "n": int(n),
                "total_integral": kernel_integral_T(n, G),
                "tail_integral": tail_integral_T(n, eps, G),
                "tail_integral_bound": tail_integral_envelope_bound(n, eps),
                "tail_sup": tail_sup_T(n, eps, G),
                "tail_sup_bound": math.pi / (n * eps * eps),
            }
        )
    return {"eps": float(eps), "grid_size": int(G), "rows": rows}
