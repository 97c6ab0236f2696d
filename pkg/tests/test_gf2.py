from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gf2order3.errors import CapExceeded, DimensionMismatch, NotInvertible
from gf2order3.families import block_element, make_transvection
from gf2order3.gf2 import (
    BitMatrix,
    BitVector,
    Subspace,
    element_order,
    image,
    kernel,
    matrix_from_text,
    matrix_to_text,
    read_matrices,
    rref,
    subspace_meet,
    subspace_sum,
    write_matrices,
)


def matrices(max_dim=8, square=False):
    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_dim))
        c = r if square else draw(st.integers(1, max_dim))
        rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
        return BitMatrix(tuple(rows), c)

    return build()


def subspaces(n):
    return st.lists(st.integers(0, (1 << n) - 1), max_size=n).map(lambda vs: Subspace.span(vs, n))


def test_rref_identity():
    m, r = rref(BitMatrix.identity(3))
    assert m == BitMatrix.identity(3) and r == 3


def test_rref_zero():
    m, r = rref(BitMatrix.zeros(2, 4))
    assert m == BitMatrix.zeros(2, 4) and r == 0


def test_rref_dependent_rows():
    m = BitMatrix.from_strings(["1100", "0110", "1010"])
    assert rref(m)[1] == 2


@given(matrices())
def test_rref_idempotent(m):
    once, r = rref(m)
    assert rref(once) == (once, r)


@given(matrices(square=True))
def test_rref_of_invertible_is_identity(m):
    if m.is_invertible():
        assert rref(m)[0] == BitMatrix.identity(m.nrows)


def test_kernel_examples():
    assert kernel(BitMatrix.identity(3)).dim == 0
    assert kernel(BitMatrix.zeros(4, 4)) == Subspace.full(4)
    d = block_element(5)
    assert kernel(d + BitMatrix.identity(5)).dim == 3
    assert kernel(block_element(2) + BitMatrix.identity(2)).dim == 0


def test_kernel_of_block_plus_identity_in_dim_four():
    d = block_element(4)
    assert kernel(d + BitMatrix.identity(4)).dim == 2


@given(matrices(max_dim=10))
def test_rank_nullity(m):
    k = kernel(m)
    assert k.dim + m.rank == m.nrows
    assert image(m).dim == m.rank
    assert all(m.apply(v) == 0 for v in k.basis)


def test_image_examples():
    assert image(BitMatrix.identity(3)).dim == 3
    assert image(BitMatrix.zeros(2, 4)).dim == 0
    m = BitMatrix.from_strings(["1100", "0110", "1010"])
    assert image(m).dim == 2


def test_sum_and_meet_examples():
    e = [1 << i for i in range(4)]
    a = Subspace.span([e[0], e[1]], 4)
    b = Subspace.span([e[1], e[2]], 4)
    assert subspace_sum(a, b).dim == 3
    assert subspace_meet(a, b) == Subspace.span([e[1]], 4)
    assert a + a == a & a == a


def test_sum_of_trivially_meeting_planes_in_dim_six():
    a = Subspace.span([0b000011, 0b000101], 6)
    b = Subspace.span([0b110000, 0b011000], 6)
    va = set(a.vectors())
    vb = set(b.vectors())
    assert va & vb == {0}
    assert subspace_sum(a, b).dim == 4


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace.full(3) + Subspace.full(4)


@settings(max_examples=60)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(subspaces(n), subspaces(n))))
def test_modular_law_and_exhaustive_containment(pair):
    a, b = pair
    s, m = a + b, a & b
    assert s.dim + m.dim == a.dim + b.dim
    assert m <= a and m <= b and a <= s and b <= s
    va, vb = set(a.vectors()), set(b.vectors())
    assert set(m.vectors()) == va & vb
    sums = {x ^ y for x in va for y in vb}
    assert set(s.vectors()) == sums


@given(st.integers(1, 12).flatmap(subspaces))
def test_subspace_text_round_trip(s):
    if s.dim:
        assert Subspace.from_text(s.to_text(), s.ambient_dim) == s


@given(matrices(max_dim=12))
def test_matrix_text_round_trip(m):
    assert matrix_from_text(matrix_to_text(m)) == m


def test_read_write_several():
    ms = [BitMatrix.identity(3), block_element(3), BitMatrix.zeros(2, 5)]
    assert read_matrices(write_matrices(ms)) == ms


def test_text_format_is_rows_then_bit_strings():
    m = BitMatrix.from_strings(["011", "110"])
    assert matrix_to_text(m) == "2 3\n011\n110"
    assert m[0, 1] == 1 and m[0, 0] == 0


def test_element_order_examples():
    assert element_order(BitMatrix.identity(4)) == 1
    assert element_order(block_element(4)) == 3
    assert element_order(make_transvection(1, 2, 3)) == 2


def test_element_order_errors():
    with pytest.raises(NotInvertible):
        element_order(BitMatrix.zeros(2, 2))
    # a Singer cycle of GL(4,2) has order 15
    singer = BitMatrix((0b0010, 0b0100, 0b1000, 0b0011), 4)
    assert element_order(singer) == 15
    with pytest.raises(CapExceeded):
        element_order(singer, cap=10)


@given(matrices(square=True))
def test_inverse(m):
    if m.is_invertible():
        assert m @ m.inverse() == BitMatrix.identity(m.nrows)
    else:
        with pytest.raises(NotInvertible):
            m.inverse()


def test_bitvector_basics():
    v = BitVector.from_string("1010")
    assert v + v == BitVector(4, 0)
    assert v.weight == 2 and str(v) == "1010"
    with pytest.raises(ValueError):
        BitVector(2, 0b100)
