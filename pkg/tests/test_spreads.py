from __future__ import annotations

from itertools import product

import pytest

from gf2order3.errors import PreconditionError
from gf2order3.gf2 import BitMatrix, Subspace
from gf2order3.group import commutator_space, fixed_space
from gf2order3.spreads import (
    SpreadKind,
    find_spreads,
    recover_f4,
    recover_hermitian,
    singular_involution,
    spread_space_check,
)

from helpers import F4R2, F4R3, GU3, SP6, dclass, family
from oracles import isotropic_points

F4_SPECS = [F4R2, F4R3, GU3]


def spreads(spec):
    return find_spreads(dclass(spec))


def test_reflection_family_only_full_spreads():
    for spec in (F4R2, F4R3):
        sc = spreads(spec)
        assert sc.singular == ()
        assert sc.spreads and all(s.kind is SpreadKind.FULL for s in sc.spreads)


def test_unitary_family_singular_lines():
    sc = spreads(GU3)
    assert len(sc.singular) == isotropic_points(3) == 9
    assert sc.count(SpreadKind.TANGENT) > 0
    assert sc.count(SpreadKind.FULL) == 0


def test_centralizing_pair_spans_no_tangent_spread():
    d = dclass(GU3)
    elems = d.elements
    pairs = [(x, y) for x, y in product(elems, repeat=2) if commutator_space(y) <= fixed_space(x)]
    assert pairs
    sc = spreads(GU3)
    for x, y in pairs[:10]:
        w = commutator_space(x) + commutator_space(y)
        # orthogonal lines span a hyperbolic spread, never a full or tangent one
        assert all(s.kind is SpreadKind.HYPERBOLIC for s in sc.spreads if s.span == w)


def test_spreads_partition_their_span():
    for spec in F4_SPECS:
        for s in spreads(spec).spreads:
            vecs = [v for m in s.members for v in m.nonzero_vectors()]
            assert len(vecs) == 15 and set(vecs) == set(s.span.nonzero_vectors())
            assert all((a & b).dim == 0 for a in s.members for b in s.members if a != b)


@pytest.mark.parametrize("spec", F4_SPECS, ids=lambda s: s.label)
def test_line_meets_fixed_space_trivially_or_fully(spec):
    elems = dclass(spec).elements
    for d, e in product(elems, repeat=2):
        meet = commutator_space(d) & fixed_space(e)
        assert meet.dim in (0, 2)


@pytest.mark.parametrize("spec", F4_SPECS, ids=lambda s: s.label)
def test_spanning_pairs_hold_four_or_five_lines(spec):
    d = dclass(spec)
    lines = d.lines
    reps = {li: x for x, li in zip(d, d.line_of)}
    for i, j in product(range(len(lines)), repeat=2):
        if i == j or lines[j] <= fixed_space(reps[i]):
            continue
        w = lines[i] + lines[j]
        inside = sum(1 for l in lines if l <= w)
        assert inside in (4, 5)


@pytest.mark.parametrize("spec", F4_SPECS, ids=lambda s: s.label)
def test_structural_checks(spec):
    sc = spreads(spec)
    assert all(sc.structure_checks.values())
    if sc.count(SpreadKind.FULL):
        assert not sc.singular


@pytest.mark.parametrize("spec", [F4R3, GU3], ids=lambda s: s.label)
def test_spreads_form_projective_plane_of_order_four(spec):
    check = spread_space_check(spreads(spec))
    assert check == {"linear_space": True, "veblen_young": True, "points": 21, "lines": 21}


def test_hyperbolic_spreads_have_two_class_lines():
    for s in spreads(GU3).spreads:
        if s.kind is SpreadKind.HYPERBOLIC:
            assert len(s.class_lines) == 2 and len(s.singular_lines) == 3


def test_alt5_on_full_spread():
    # the class elements on a full spread permute its 5 lines as Alt(5)
    from gf2order3.group import closure

    sc = spreads(F4R2)
    s = sc.spreads[0]
    d = dclass(F4R2)
    local = [x for x, li in zip(d, d.line_of) if li in s.class_lines]
    perms = set()
    for g in closure(local):
        perms.add(tuple(s.members.index(m.image(g)) for m in s.members))
    assert len(perms) == 60


@pytest.mark.parametrize("spec", F4_SPECS, ids=lambda s: s.label)
def test_recover_f4(spec):
    sc = spreads(spec)
    fam = family(spec)
    f4s = recover_f4(dclass(spec), sc.all_lines, fam.generators, sc)
    checks = f4s.check(fam.generators, sc.all_lines)
    assert all(checks.values())
    j = fam.j_operator
    assert f4s.j_operator in (j, j @ j)
    assert f4s.solutions == 2
    assert f4s.j_operator.key == min(j.key, (j @ j).key)


def test_recover_f4_on_cotriangular_input_fails():
    with pytest.raises(PreconditionError):
        find_spreads(dclass(SP6))


def test_recover_hermitian():
    sc = spreads(GU3)
    fam = family(GU3)
    f4s = recover_f4(dclass(GU3), sc.all_lines, fam.generators, sc)
    herm = recover_hermitian(f4s, dclass(GU3), sc.singular, fam.generators)
    assert all(herm.check(fam.generators, sc.singular).values())
    assert len(herm.absolute_points) == 9
    assert set(herm.absolute_points) == set(sc.singular)
    for l in sc.lines:
        v = l.basis[0]
        assert herm(v, v) != 0


def test_recover_hermitian_needs_singular_lines():
    sc = spreads(F4R3)
    fam = family(F4R3)
    f4s = recover_f4(dclass(F4R3), sc.all_lines, fam.generators, sc)
    with pytest.raises(PreconditionError):
        recover_hermitian(f4s, dclass(F4R3), sc.singular, fam.generators)


def test_singular_involutions():
    sc = spreads(GU3)
    d = dclass(GU3)
    built = 0
    for s in sc.spreads:
        if s.kind is not SpreadKind.TANGENT:
            continue
        h = s.singular_line
        f = next(x for x in d if not h <= fixed_space(x))
        t = singular_involution(s, f, d)
        assert (t @ t).is_identity() and not t.is_identity()
        assert commutator_space(t) == h
        assert not all(t.apply(v) == v for v in commutator_space(f).basis)
        assert all(t.apply(v) == v for v in s.span.basis)
        assert fixed_space(t).dim == d.n - 2
        built += 1
    assert built == sc.count(SpreadKind.TANGENT)


def test_singular_involution_preconditions():
    sc = spreads(F4R2)
    with pytest.raises(PreconditionError):
        singular_involution(sc.spreads[0], dclass(F4R2).seed, dclass(F4R2))
