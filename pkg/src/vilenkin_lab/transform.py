"""Vilenkin characters and the fast mixed-radix transform.

The character psi_n is the product of generalized Rademacher factors
r_k(x)^{n_k} = exp(2 pi i n_k x_k / m_k).  Pointwise evaluation goes
through a single exact rational phase

    phase(n, x) = sum_k n_k x_k (M_N / m_k)   (mod M_N),

accumulated in integer arithmetic before one complex exponential, so no
product-of-roots drift enters even at M_N ~ 10^5.

The analysis transform carries the 1/M_N Haar factor,

    coeffs[k] = (1/M_N) sum_j values[j] * conj(psi_k(x_j)),

and the synthesis transform carries none.  Because psi separates over the
digit coordinates, the fast path is exactly a multidimensional DFT of the
cell array reshaped to (m_{N-1}, ..., m_0); numpy's FFT supplies the
O(M_N log-ish) stage structure.  A naive double-sum oracle stays in the
code base as the permanent cross-check.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .group import digit_matrix, digits


@dataclass
class StepFunction:
    """A function constant on rank-N cylinders: one complex value per cell."""

    resolution: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)

    def copy(self):
        return StepFunction(self.resolution, self.values.copy())


@dataclass
class Spectrum:
    """Vilenkin-Fourier coefficients hat f(0 .. M_N - 1)."""

    resolution: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)


def _check_size(arr, spec, resolution):
    if len(arr) != spec.M[resolution]:
        raise ValueError(
            f"array length {len(arr)} != M_{resolution} = {spec.M[resolution]}"
        )


def rademacher(k, x, spec):
    """r_k(x) = exp(2 pi i x_k / m_k)."""
    if not 0 <= k < x.resolution:
        raise ValueError("Rademacher index out of range")
    return cmath.exp(2j * math.pi * x.digits[k] / spec.m[k])


def psi_phase_numerator(n, x, spec):
    """Integer p with psi_n(x) = exp(2 pi i p / M_N), N = x.resolution."""
    N = x.resolution
    MN = spec.M[N]
    nd = digits(n, spec, N).coefficients
    p = 0
    for k in range(N):
        p += nd[k] * x.digits[k] * (MN // spec.m[k])
    return p % MN


def psi(n, x, spec):
    """The Vilenkin character psi_n evaluated at a point."""
    N = x.resolution
    if not 0 <= n < spec.M[N]:
        raise ValueError(f"character index {n} out of range [0, {spec.M[N]})")
    p = psi_phase_numerator(n, x, spec)
    return cmath.exp(2j * math.pi * p / spec.M[N])


@lru_cache(maxsize=16)
def phase_numerator_matrix(spec, resolution=None):
    """(M_N, M_N) int64 array P with psi_k(x_j) = exp(2 pi i P[k, j] / M_N)."""
    if resolution is None:
        resolution = spec.resolution
    D = digit_matrix(spec, resolution)
    MN = spec.M[resolution]
    w = np.array([MN // spec.m[k] for k in range(resolution)], dtype=np.int64)
    return (D * w) @ D.T % MN


@lru_cache(maxsize=16)
def character_matrix(spec, resolution=None):
    """Full table Psi[k, j] = psi_k(x_j), built from exact phases."""
    if resolution is None:
        resolution = spec.resolution
    P = phase_numerator_matrix(spec, resolution)
    return np.exp(2j * np.pi * P / spec.M[resolution])


def _mixed_radix_shape(spec, resolution):
    # C order: the last axis is x_0 (stride M_0 = 1).
    return tuple(spec.m[k] for k in reversed(range(resolution)))


def forward(f, spec):
    """Analysis transform, fast path (multidimensional FFT over the digits)."""
    N = f.resolution
    _check_size(f.values, spec, N)
    shape = _mixed_radix_shape(spec, N)
    out = np.fft.fftn(f.values.reshape(shape)).reshape(-1) / spec.M[N]
    return Spectrum(resolution=N, coeffs=out)


def inverse(s, spec):
    """Synthesis transform: values[j] = sum_k coeffs[k] psi_k(x_j)."""
    N = s.resolution
    _check_size(s.coeffs, spec, N)
    shape = _mixed_radix_shape(spec, N)
    out = np.fft.ifftn(s.coeffs.reshape(shape)).reshape(-1) * spec.M[N]
    return StepFunction(resolution=N, values=out)


def naive_forward(f, spec):
    """O(M_N^2) double-sum oracle for forward; test and small sizes only."""
    N = f.resolution
    _check_size(f.values, spec, N)
    Psi = character_matrix(spec, N)
    coeffs = Psi.conj() @ f.values / spec.M[N]
    return Spectrum(resolution=N, coeffs=coeffs)


def integrate(f):
    """Exact Haar integral of a step function: the plain cell average.

    Uses compensated summation so that integer-valued cancellation (e.g.
    mean-zero atoms) comes out as an exact 0.0.
    """
    n = len(f.values)
    re = math.fsum(f.values.real)
    im = math.fsum(f.values.imag)
    return complex(re / n, im / n)


def lp_norm(f, p):
    """L_p norm over G_m, computed exactly as a cell average."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))


def parseval_gap(f, s):
    """|sum |coeffs|^2 - (1/M_N) sum |values|^2| for a paired f, spectrum."""
    lhs = float(np.sum(np.abs(s.coeffs) ** 2))
    rhs = float(np.mean(np.abs(f.values) ** 2))
    return abs(lhs - rhs)


# --- wire formats -----------------------------------------------------------

def _pairs(arr):
    return [[float(z.real), float(z.imag)] for z in arr]


def step_function_to_json(f):
    return json.dumps({"resolution": f.resolution, "values": _pairs(f.values)})


def step_function_from_json(text):
    obj = json.loads(text)
    vals = np.array([complex(re, im) for re, im in obj["values"]])
    return StepFunction(resolution=obj["resolution"], values=vals)


def spectrum_to_json(s):
    return json.dumps({"resolution": s.resolution, "coeffs": _pairs(s.coeffs)})


def spectrum_from_json(text):
    obj = json.loads(text)
    coeffs = np.array([complex(re, im) for re, im in obj["coeffs"]])
    return Spectrum(resolution=obj["resolution"], coeffs=coeffs)


def values_to_bytes(arr):
    """Little-endian f64 (re, im) pairs, for large tables."""
    out = np.empty(2 * len(arr), dtype="<f8")
    out[0::2] = np.asarray(arr).real
    out[1::2] = np.asarray(arr).imag
    return out.tobytes()


def values_from_bytes(buf):
    flat = np.frombuffer(buf, dtype="<f8")
    return flat[0::2] + 1j * flat[1::2]
