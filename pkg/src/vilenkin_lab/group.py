"""Mixed-radix arithmetic on bounded Vilenkin groups.

Conventions.
    The group G_m is the direct product of the cyclic groups Z_{m_0},
    Z_{m_1}, ... with every m_k >= 2 and max m_k finite.  All computation
    happens at a finite resolution N: a point is identified with its first
    N digits (x_0, ..., x_{N-1}) and with the cell index

        index = sum_k x_k * M_k,      M_0 = 1,  M_{k+1} = m_k * M_k.

    The index <-> digit map is the little-endian mixed-radix bijection.
    Cell j at resolution N stands for the cylinder of all group elements
    whose first N digits equal the digits of j; Haar measure gives every
    such cell mass 1/M_N, so integrals of step functions are plain finite
    averages with no quadrature error.

    Cylinders: I_N(x) is the set of points agreeing with x in the first N
    coordinates, I_N := I_N(0).  The complement of I_N splits into the
    annuli I_N^{k,l} classified by the first two "active" digit positions
    (k < l < N: digits before k zero, x_k != 0, digits strictly between k
    and l zero, x_l != 0; l = N: digits before k zero, x_k != 0, digits
    k+1 .. N-1 zero).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

# Cell indices are stored in int64 arrays; a spec whose M_L needs more
# than this many bits is rejected outright.
MAX_INDEX_BITS = 62


@dataclass(frozen=True)
class GroupSpec:
    """The sequence m of generator orders and its generalized number system."""

    m: tuple
    M: tuple

    @property
    def resolution(self):
        return len(self.m)

    @property
    def lam(self):
        """Largest generator order (the boundedness constant)."""
        return max(self.m)

    @property
    def size(self):
        """Number of cells at full resolution, M_L."""
        return self.M[-1]

    def to_json(self):
        return json.dumps({"m": list(self.m), "resolution": self.resolution})

    @staticmethod
    def from_json(text):
        obj = json.loads(text)
        return build_spec(obj["m"], obj.get("resolution"))


@dataclass(frozen=True)
class Point:
    """A group element truncated to its first `resolution` digits."""

    digits: tuple
    resolution: int

    def __post_init__(self):
        if len(self.digits) != self.resolution:
            raise ValueError("digit count does not match resolution")


@dataclass(frozen=True)
class DigitExpansion:
    """Mixed-radix expansion n = sum_j coefficients[j] * M_j."""

    coefficients: tuple
    order: int


@dataclass(frozen=True)
class CellSet:
    """A set of resolution-N cells together with its exact Haar measure."""

    indices: tuple
    resolution: int
    measure: Fraction


def build_spec(m, L=None):
    """Build a GroupSpec from generator orders m, cycled out to length L.

    m may be shorter than L; it is then repeated periodically, which makes
    the constant case (e.g. the Walsh group, m = [2]) convenient to write.
    """
    m = tuple(int(v) for v in m)
    if not m:
        raise ValueError("m must be nonempty")
    for v in m:
        if v < 2:
            raise ValueError(f"every generator order must be >= 2, got {v}")
    if L is None:
        L = len(m)
    L = int(L)
    if L < 1:
        raise ValueError("resolution bound L must be >= 1")
    if len(m) < L:
        m = tuple(m[k % len(m)] for k in range(L))
    else:
        m = m[:L]
    M = [1]
    for mk in m:
        M.append(M[-1] * mk)
    if M[-1].bit_length() > MAX_INDEX_BITS:
        raise OverflowError(
            f"M_L = {M[-1]} needs {M[-1].bit_length()} bits; "
            f"cell indices are limited to {MAX_INDEX_BITS} bits"
        )
    return GroupSpec(m=m, M=tuple(M))


def digits(n, spec, length=None):
    """Mixed-radix digit expansion of an integer index."""
    n = int(n)
    if length is None:
        length = spec.resolution
    if not 0 <= n < spec.M[length]:
        raise ValueError(f"index {n} out of range [0, {spec.M[length]})")
    coeffs = []
    rest = n
    for k in range(length):
        rest, d = divmod(rest, spec.m[k])
        coeffs.append(d)
    order = 0
    for j, d in enumerate(coeffs):
        if d != 0:
            order = j
    return DigitExpansion(coefficients=tuple(coeffs), order=order)


def index_of(point, spec):
    """Inverse of point_from_index."""
    return sum(d * spec.M[k] for k, d in enumerate(point.digits))


def point_from_index(n, spec, resolution=None):
    if resolution is None:
        resolution = spec.resolution
    exp = digits(n, spec, resolution)
    return Point(digits=exp.coefficients, resolution=resolution)


def unit_point(k, spec, resolution=None):
    """The point e_k (digit 1 in position k, zeros elsewhere)."""
    if resolution is None:
        resolution = spec.resolution
    if not 0 <= k < resolution:
        raise ValueError("position out of range")
    d = [0] * resolution
    d[k] = 1
    return Point(digits=tuple(d), resolution=resolution)


def add(x, y, spec):
    """Coordinate-wise addition mod m_k (the group operation)."""
    if x.resolution != y.resolution:
        raise ValueError("resolution mismatch")
    d = tuple((a + b) % spec.m[k] for k, (a, b) in enumerate(zip(x.digits, y.digits)))
    return Point(digits=d, resolution=x.resolution)


def sub(x, y, spec):
    """Coordinate-wise subtraction mod m_k; add(sub(x, y), y) == x."""
    if x.resolution != y.resolution:
        raise ValueError("resolution mismatch")
    d = tuple((a - b) % spec.m[k] for k, (a, b) in enumerate(zip(x.digits, y.digits)))
    return Point(digits=d, resolution=x.resolution)


@lru_cache(maxsize=64)
def digit_matrix(spec, resolution=None):
    """(M_N, N) int64 array: row j holds the digits of cell index j."""
    if resolution is None:
        resolution = spec.resolution
    size = spec.M[resolution]
    idx = np.arange(size, dtype=np.int64)
    out = np.empty((size, resolution), dtype=np.int64)
    for k in range(resolution):
        out[:, k] = (idx // spec.M[k]) % spec.m[k]
    return out


def _cellset(mask, resolution, spec):
    idx = np.flatnonzero(mask)
    return CellSet(
        indices=tuple(int(i) for i in idx),
        resolution=resolution,
        measure=Fraction(len(idx), spec.M[resolution]),
    )


def cylinder(N, base, spec, resolution=None):
    """The cylinder I_N(base) as a set of resolution-level cells."""
    if resolution is None:
        resolution = spec.resolution
    if not 0 <= N <= resolution:
        raise ValueError("cylinder rank exceeds resolution")
    D = digit_matrix(spec, resolution)
    mask = np.ones(spec.M[resolution], dtype=bool)
    for k in range(N):
        mask &= D[:, k] == base.digits[k]
    return _cellset(mask, resolution, spec)


def zero_cylinder_mask(N, spec, resolution=None):
    """Boolean mask of I_N = I_N(0) over resolution-level cells."""
    if resolution is None:
        resolution = spec.resolution
    idx = np.arange(spec.M[resolution], dtype=np.int64)
    return idx % spec.M[N] == 0


def annulus_cells(N, k, l, spec, resolution=None):
    """The annulus I_N^{k,l} as a set of resolution-level cells.

    Two branches: k < l < N fixes the first two nonzero digit positions;
    l = N fixes a single nonzero position k with zeros through N-1.
    """
    if resolution is None:
        resolution = spec.resolution
    if not (0 <= k < l <= N <= resolution):
        raise ValueError(f"invalid annulus indices k={k}, l={l}, N={N}")
    D = digit_matrix(spec, resolution)
    mask = np.ones(spec.M[resolution], dtype=bool)
    for j in range(k):
        mask &= D[:, j] == 0
    mask &= D[:, k] != 0
    if l < N:
        for j in range(k + 1, l):
            mask &= D[:, j] == 0
        mask &= D[:, l] != 0
    else:
        for j in range(k + 1, N):
            mask &= D[:, j] == 0
    return _cellset(mask, resolution, spec)


def annulus_pairs(N):
    """All (k, l) pairs appearing in the decomposition of the complement of I_N."""
    pairs = [(k, l) for k in range(N - 1) for l in range(k + 1, N)]
    pairs += [(k, N) for k in range(N)]
    return pairs


def annulus_partition(N, spec, resolution=None):
    """Dict (k, l) -> CellSet covering the complement of I_N exactly once."""
    return {
        (k, l): annulus_cells(N, k, l, spec, resolution)
        for k, l in annulus_pairs(N)
    }
