from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gf2order3.errors import CapExceeded, DimensionMismatch, InvariantViolation, PreconditionError
from gf2order3.families import FamilySpec, block_element, make_d_element, make_family, standard_matrix
from gf2order3.gf2 import BitMatrix, Subspace
from gf2order3.group import (
    InvariantKind,
    build_class,
    check_hypotheses,
    closure,
    commutator_space,
    conjugation_orbit,
    decompose,
    fixed_space,
    invariant_subspace_check,
    is_d_element,
)

from helpers import ALT7, GU3, SEVEN3, SL3, SMALL, SP4, SP6, dclass, family, group
from oracles import gl_class_size


def test_closure_of_identity():
    assert closure([BitMatrix.identity(4)]).order == 1


def test_closure_seven_three():
    assert group(SEVEN3).order == 21


def test_closure_symplectic_dim_four():
    assert group(SP4).order == 360


def test_closure_cap_reports_partial():
    with pytest.raises(CapExceeded) as exc:
        closure(family(SL3).generators, cap=50)
    assert exc.value.partial > 50


def test_closure_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        closure([BitMatrix.identity(3), BitMatrix.identity(4)])


@pytest.mark.parametrize("spec", [SL3, SEVEN3, SP4, ALT7], ids=lambda s: s.label)
def test_closure_is_a_group(spec):
    g = group(spec)
    elems = g.elements
    assert BitMatrix.identity(g.n) in g
    assert all(x.inverse() in g for x in elems)
    rng = random.Random(7)
    for _ in range(500):
        a, b = rng.choice(elems), rng.choice(elems)
        assert a @ b in g


def test_closure_exhaustively_closed_for_small_group():
    g = group(SL3)
    elems = g.elements
    assert all(a @ b in g for a in elems for b in elems)


@pytest.mark.parametrize("spec", [SL3, SP4, GU3], ids=lambda s: s.label)
def test_closure_independent_of_generator_order(spec):
    gens = list(family(spec).generators)
    rev = closure(gens[::-1])
    assert np.array_equal(np.asarray(rev.keys), np.asarray(group(spec).keys))


def test_closure_slow_path_matches_fast_path():
    gens = [block_element(9, i, i + 1) for i in (0, 1)]
    slow = closure(gens)
    small = closure([block_element(3, 0, 1), block_element(3, 1, 2)])
    assert slow.order == small.order == 168


def test_commutator_and_fixed_examples():
    ident = BitMatrix.identity(5)
    assert commutator_space(ident).dim == 0 and fixed_space(ident) == Subspace.full(5)
    d = standard_matrix(5)
    assert commutator_space(d) == Subspace.span([1, 2], 5)
    assert fixed_space(d) == Subspace.span([4, 8, 16], 5)


def test_commutator_of_transvection_product():
    v, w = 0b0011, 0b0100
    phi, psi = 0b0100, 0b0001  # phi(v)=0, psi(w)=0, psi(v)=1, phi(w)=1
    d = make_d_element(v, w, phi, psi, 4)
    assert commutator_space(d) == Subspace.span([v, w], 4)


def test_class_of_seven_three():
    d = dclass(SEVEN3)
    assert d.size == 7
    assert d.is_single_class is False
    assert not d.inverse_closed


def test_class_in_gl32():
    d = dclass(SL3)
    assert d.size == gl_class_size(3) == 56
    assert d.is_single_class is True
    assert d.inverse_closed


def test_class_in_alt7_is_double_three_cycles():
    d = dclass(ALT7)
    g = group(ALT7)
    # elements of order 3 in A7: 70 three-cycles and 280 double three-cycles
    order3 = [m for m in g if not m.is_identity() and (m @ m @ m).is_identity()]
    assert len(order3) == 350
    assert d.size == 280
    assert closure(d.elements).order == 2520


def test_build_class_rejects_bad_seed():
    with pytest.raises(PreconditionError):
        build_class([BitMatrix.identity(3)], BitMatrix.identity(3))


def test_hypotheses_symplectic_six():
    fam = family(SP6)
    d = build_class(fam.generators, fam.seed)
    rep = check_hypotheses(fam.generators, d)
    assert rep.commutator_full and rep.centralizer_trivial and rep.transitive_on_lines and rep.ok


def test_hypotheses_fixed_block_fail():
    fam = make_family(FamilySpec.fixed_block())
    d = build_class(fam.generators, fam.seed)
    rep = check_hypotheses(fam.generators, d)
    assert rep.dim_centralizer == 2 and not rep.ok


def test_hypotheses_pair_module_without_radical():
    rep = check_hypotheses(group(FamilySpec.alternating(7, False)), dclass(FamilySpec.alternating(7, False)))
    assert rep.dim_centralizer == 0 and rep.ok


def test_hypotheses_swapped_blocks_not_generated_by_class():
    fam = make_family(FamilySpec.swapped_blocks())
    g = closure(fam.generators)
    d = build_class(fam.generators, fam.seed, g)
    rep = check_hypotheses(g, d)
    assert rep.generated_by_class is False
    assert rep.line_orbit_count == 2
    assert not rep.ok


def test_invariant_subspace_examples():
    d = standard_matrix(4)
    assert invariant_subspace_check(d, commutator_space(d)) is InvariantKind.CONTAINS_LINE
    assert invariant_subspace_check(d, Subspace.span([4], 4)) is InvariantKind.CENTRALIZED
    assert invariant_subspace_check(d, Subspace.span([1], 4)) is InvariantKind.NOT_INVARIANT


def test_invariant_subspace_precondition():
    with pytest.raises(PreconditionError):
        invariant_subspace_check(BitMatrix.identity(3), Subspace.full(3))


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_direct_sum_decomposition_for_every_class_element(spec):
    for d in dclass(spec):
        assert decompose(d).is_direct


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_element_cycles_nonzero_vectors_of_its_line(spec):
    for d in dclass(spec):
        a = commutator_space(d).nonzero_vectors()[0]
        orbit = {a, d.apply(a), d.apply(d.apply(a))}
        assert orbit == set(commutator_space(d).nonzero_vectors())


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_class_closed_under_conjugation_by_generators(spec):
    d = dclass(spec)
    gens = family(spec).generators
    sample = d.elements[:: max(1, d.size // 50)]
    for g in gens:
        gi = g.inverse()
        assert all(gi @ x @ g in d for x in sample)


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_every_class_element_has_order_three(spec):
    assert all(is_d_element(x) for x in dclass(spec))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_invariant_subspace_dichotomy_on_random_subspaces(data):
    spec = data.draw(st.sampled_from(SMALL))
    d = data.draw(st.sampled_from(dclass(spec).elements))
    n = d.nrows
    vecs = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n))
    w = Subspace.span(vecs, n)
    hull = w
    for _ in range(2):
        hull = hull + hull.image(d)
    for space in (w, hull):
        kind = invariant_subspace_check(d, space)
        if space.is_invariant(d):
            assert kind is not InvariantKind.NOT_INVARIANT


def test_conjugation_orbit_sorted_and_stable():
    gens = family(SL3).generators
    a = conjugation_orbit(standard_matrix(3), gens)
    b = conjugation_orbit(standard_matrix(3), gens[::-1])
    assert list(a) == sorted(a) and np.array_equal(a, b)
