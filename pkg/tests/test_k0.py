import json

import pytest
from hypothesis import given, settings

from conftest import lattice_classes, pic_classes, random_lattice_class
from k0surf.k0 import (
    M10,
    M11,
    O,
    K0Class,
    NonLatticeError,
    ch_curve_sheaf,
    ch_line_bundle,
    det,
    dual,
    euler_chi,
    euler_pairing,
    from_basis_coords,
    from_csv_row,
    gram,
    lattice_basis,
    loads_classes,
    dumps_classes,
    mult,
    to_basis_coords,
    to_csv_row,
    twist,
)
from k0surf.pic import K, ZERO, e, h, intersect


def rr_line_bundle(D):
    # classical Riemann-Roch for line bundles: chi(O(D)) = 1 + (D.D - D.K)/2
    return 1 + (intersect(D, D) - intersect(D, K)) // 2


def test_ch_line_bundle():
    assert ch_line_bundle(ZERO) == K0Class(1, ZERO, 0)
    assert ch_line_bundle(2 * e(1)) == K0Class(1, 2 * e(1), -4)
    assert ch_line_bundle(K) == K0Class(1, K, 1)


def test_ch_curve_sheaf():
    assert ch_curve_sheaf(e(1)) == K0Class(0, e(1), 1)
    assert ch_curve_sheaf(ZERO) == K0Class(0, ZERO, 0)
    assert euler_pairing(ch_curve_sheaf(e(2)), ch_curve_sheaf(e(3))) == 0


def test_euler_chi_examples():
    assert euler_chi(O) == 1
    assert euler_chi(ch_line_bundle(2 * e(1))) == 0
    assert euler_chi(ch_line_bundle(K)) == 1


def test_euler_chi_rejects_non_lattice():
    bad = K0Class(0, ZERO, 1)
    assert not bad.in_lattice
    with pytest.raises(NonLatticeError):
        euler_chi(bad)
    with pytest.raises(NonLatticeError):
        euler_pairing(O, bad)


def test_m10_m11_gram():
    assert M10.in_lattice and M11.in_lattice
    assert euler_pairing(M10, M11) == 1
    assert euler_pairing(M11, M10) == -5
    g = gram([M10, M11])
    assert g == [[-1, 1], [-5, 4]]
    assert det(g) == 1
    assert gram([O]) == [[1]]


def test_standard_basis_sequence():
    # (O, O(h), O(2h), O_{e_1}, ..., O_{e_8}) is semiorthonormal and its
    # classes span the same lattice as the stated basis
    seq = [O, ch_line_bundle(h()), ch_line_bundle(2 * h())] + [ch_curve_sheaf(e(i)) for i in range(1, 9)]
    g = gram(seq)
    for i in range(11):
        assert g[i][i] == 1
        for j in range(i):
            assert g[i][j] == 0
    from k0surf.intlinalg import same_integer_span

    assert same_integer_span(
        [to_basis_coords(v) for v in seq], [to_basis_coords(v) for v in lattice_basis()]
    )


def test_euler_form_unimodular_on_lattice():
    assert abs(det(gram(lattice_basis()))) == 1


def test_basis_coords_roundtrip(rng):
    for _ in range(200):
        v = random_lattice_class(rng)
        assert from_basis_coords(to_basis_coords(v)) == v


def test_mult_examples():
    v = K0Class(3, e(2) - h(), 7)
    assert mult(v, O) == v
    D1, D2 = e(1) + 2 * h(), K - e(3)
    assert mult(ch_line_bundle(D1), ch_line_bundle(D2)) == ch_line_bundle(D1 + D2)
    assert mult(K0Class(0, e(1), 1), K0Class(0, e(2), 1)) == K0Class(0, ZERO, 0)


def test_dual_and_twist_examples():
    D = h() - 2 * e(5)
    assert dual(ch_line_bundle(D)) == ch_line_bundle(-D)
    assert twist(M11, ZERO) == M11
    assert twist(ch_line_bundle(2 * e(1)), K - 2 * e(1)) == ch_line_bundle(K)


@settings(max_examples=1000)
@given(lattice_classes(), lattice_classes())
def test_pairing_is_chi_of_dual_product(a, b):
    assert euler_pairing(a, b) == euler_chi(mult(dual(a), b))
    assert euler_pairing(dual(b), dual(a)) == euler_pairing(a, b)


@settings(max_examples=1000)
@given(lattice_classes(), lattice_classes(), lattice_classes())
def test_ring_identities(a, b, c):
    assert mult(a, b) == mult(b, a)
    assert mult(mult(a, b), c) == mult(a, mult(b, c))
    assert mult(a, O) == a
    assert dual(dual(a)) == a
    assert dual(mult(a, b)) == mult(dual(a), dual(b))
    assert dual(a + b) == dual(a) + dual(b)
    for v in (mult(a, b), dual(a), a + b, a - b):
        assert v.in_lattice


@settings(max_examples=1000)
@given(lattice_classes(), lattice_classes(), lattice_classes())
def test_pairing_bilinear(a, b, c):
    assert euler_pairing(a + c, b) == euler_pairing(a, b) + euler_pairing(c, b)
    assert euler_pairing(a, b + c) == euler_pairing(a, b) + euler_pairing(a, c)


@settings(max_examples=500)
@given(lattice_classes(), lattice_classes(), pic_classes)
def test_twist_invariance(a, b, D):
    assert twist(a, D).in_lattice
    assert euler_pairing(twist(a, D), twist(b, D)) == euler_pairing(a, b)


@settings(max_examples=500)
@given(pic_classes, pic_classes)
def test_line_bundles_against_classical_rr(D1, D2):
    assert euler_chi(ch_line_bundle(D1)) == rr_line_bundle(D1)
    assert euler_pairing(ch_line_bundle(D1), ch_line_bundle(D2)) == rr_line_bundle(D2 - D1)
    assert euler_pairing(ch_line_bundle(D1), ch_line_bundle(D1)) == 1


def test_serialization_roundtrip(rng):
    seq = [random_lattice_class(rng) for _ in range(5)]
    assert loads_classes(dumps_classes(seq)) == seq
    assert json.loads(dumps_classes([M10]))[0] == {"x": 0, "y": [-1, 0, 0, 0, 0, 0, 0, 0, 0], "z": 3}
    for v in seq:
        assert from_csv_row(to_csv_row(v)) == v
        assert len(to_csv_row(v).split(",")) == 11


def test_det_bareiss():
    assert det([[2, 1], [1, 1]]) == 1
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[1, 2], [2, 4]]) == 0
    assert det([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == 2 * (3 - 2) - 0 + 1 * (1 - 3)
