import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from vilenkin_lab.group import (
    add,
    annulus_cells,
    annulus_pairs,
    annulus_partition,
    build_spec,
    cylinder,
    digits,
    index_of,
    point_from_index,
    sub,
    unit_point,
    zero_cylinder_mask,
)


def test_build_spec_dyadic():
    spec = build_spec([2, 2, 2])
    assert spec.M == (1, 2, 4, 8)
    assert spec.lam == 2


def test_build_spec_mixed():
    spec = build_spec([2, 3, 4])
    assert spec.M == (1, 2, 6, 24)
    assert spec.lam == 4


def test_build_spec_cycles_pattern():
    spec = build_spec([2, 3], 5)
    assert spec.m == (2, 3, 2, 3, 2)


def test_build_spec_rejects_small_orders():
    with pytest.raises(ValueError):
        build_spec([2, 1, 2])


def test_build_spec_rejects_overflow():
    with pytest.raises(OverflowError, match="bits"):
        build_spec([2], 80)


def test_digits_zero():
    spec = build_spec([2, 3, 4])
    exp = digits(0, spec)
    assert exp.coefficients == (0, 0, 0)
    assert exp.order == 0


def test_digits_mixed_radix():
    spec = build_spec([2, 3, 4])
    exp = digits(17, spec)
    assert exp.coefficients == (1, 2, 2)
    assert exp.order == 2


def test_digits_match_binary():
    spec = build_spec([2], 3)
    assert digits(5, spec).coefficients == (1, 0, 1)
    assert digits(5, spec).order == 2


def test_digits_exhaustive_reconstruction():
    spec = build_spec([2, 3, 4])
    for n in range(24):
        exp = digits(n, spec)
        assert sum(d * spec.M[k] for k, d in enumerate(exp.coefficients)) == n


def test_digits_out_of_range():
    spec = build_spec([2, 3])
    with pytest.raises(ValueError):
        digits(6, spec)


def test_add_mod_componentwise():
    spec = build_spec([2, 3])
    x = point_from_index(index_of_digits((1, 2), spec), spec)
    y = x
    z = add(x, y, spec)
    assert z.digits == (0, 1)


def index_of_digits(d, spec):
    return sum(v * spec.M[k] for k, v in enumerate(d))


def test_add_identity_and_sub_inverse():
    spec = build_spec([2, 3, 4])
    zero = point_from_index(0, spec)
    for n in (0, 5, 17, 23):
        x = point_from_index(n, spec)
        assert add(x, zero, spec) == x
        assert index_of(sub(add(x, x, spec), x, spec), spec) == n


def test_sub_self_inverse_z2():
    spec = build_spec([2], 3)
    zero = point_from_index(0, spec)
    e0 = unit_point(0, spec)
    assert sub(zero, e0, spec) == e0


def test_resolution_mismatch_errors():
    spec = build_spec([2, 2])
    x = point_from_index(1, spec, 2)
    y = point_from_index(1, spec, 1)
    with pytest.raises(ValueError):
        add(x, y, spec)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 23), st.integers(0, 23), st.integers(0, 23))
def test_group_axioms(a, b, c):
    spec = build_spec([2, 3, 4])
    x, y, z = (point_from_index(v, spec) for v in (a, b, c))
    assert add(x, y, spec) == add(y, x, spec)
    assert add(add(x, y, spec), z, spec) == add(x, add(y, z, spec), spec)
    zero = point_from_index(0, spec)
    inv = sub(zero, x, spec)
    assert add(x, inv, spec) == zero


def test_index_digit_roundtrip():
    spec = build_spec([3, 2, 5])
    for n in range(spec.size):
        assert index_of(point_from_index(n, spec), spec) == n


def test_cylinder_whole_group():
    spec = build_spec([2, 3, 4])
    cells = cylinder(0, point_from_index(0, spec), spec)
    assert cells.measure == 1
    assert len(cells.indices) == 24


def test_cylinder_single_cell():
    spec = build_spec([2, 3, 4])
    cells = cylinder(3, point_from_index(7, spec), spec)
    assert cells.indices == (7,)
    assert cells.measure == Fraction(1, 24)


def test_complement_measure():
    spec = build_spec([2], 5)
    mask = zero_cylinder_mask(3, spec)
    assert Fraction(int((~mask).sum()), spec.size) == 1 - Fraction(1, 8)


def test_annulus_dyadic_examples():
    spec = build_spec([2], 2)
    assert annulus_cells(2, 0, 1, spec).indices == (3,)
    assert annulus_cells(2, 0, 2, spec).indices == (1,)


def test_annulus_invalid_ranges():
    spec = build_spec([2], 4)
    with pytest.raises(ValueError):
        annulus_cells(2, 1, 1, spec)
    with pytest.raises(ValueError):
        annulus_cells(2, 0, 3, spec)


@pytest.mark.parametrize("m,N", [([2], 4), ([2, 3, 4], 3), ([3], 3)])
def test_annulus_partition_covers_complement(m, N):
    spec = build_spec(m, max(N + 1, 4))
    parts = annulus_partition(N, spec)
    seen = []
    for cells in parts.values():
        seen.extend(cells.indices)
    assert len(seen) == len(set(seen))  # pairwise disjoint
    expected = set(np.flatnonzero(~zero_cylinder_mask(N, spec)))
    assert set(seen) == expected
    total = sum(cells.measure for cells in parts.values())
    assert total + Fraction(1, spec.M[N]) == 1


def test_annulus_pairs_layout():
    assert annulus_pairs(2) == [(0, 1), (0, 2), (1, 2)]


def test_spec_json_roundtrip():
    spec = build_spec([2, 3, 4])
    from vilenkin_lab.group import GroupSpec

    again = GroupSpec.from_json(spec.to_json())
    assert again == spec
