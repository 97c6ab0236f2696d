from __future__ import annotations

from itertools import combinations

import pytest

from gf2order3.errors import PreconditionError
from gf2order3.families import FamilySpec, make_family
from gf2order3.geometry import (
    PlaneKind,
    build_geometry,
    connectivity,
    equiv_classes,
    perp_radical,
    plane_census,
    plane_type,
    transport_path,
)
from gf2order3.gf2 import BitMatrix, Subspace
from gf2order3.group import build_class, closure

from helpers import F4R2, F4R3, GU3, OMINUS6, OPLUS6, SL3, SL4, SMALL, SP4, SP6, T5, T7, dclass, family, geometry
from oracles import nondegenerate_planes, nonsingular_count, pair_geometry


def test_symplectic_dim_four_counts():
    g = geometry(SP4)
    assert len(g.points) == 2**4 - 1
    assert len(g.lines) == nondegenerate_planes(4) == 20


def test_symplectic_dim_six_counts():
    g = geometry(SP6)
    assert len(g.points) == 63
    assert len(g.lines) == nondegenerate_planes(6)


def test_elliptic_dim_six_points():
    assert len(geometry(OMINUS6).points) == nonsingular_count(6, minus=True) == 36


def test_hyperbolic_dim_six_points():
    assert len(geometry(OPLUS6).points) == nonsingular_count(6, minus=False) == 28


@pytest.mark.parametrize("spec,k", [(T5, 5), (T7, 7)], ids=["5", "7"])
def test_pair_geometry_counts(spec, k):
    g = geometry(spec)
    assert (len(g.points), len(g.lines)) == pair_geometry(k)


@pytest.mark.parametrize("spec", [F4R2, F4R3, GU3], ids=lambda s: s.label)
def test_f4_families_have_no_points(spec):
    assert geometry(spec).points == ()


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_lines_carry_zero_or_three_points(spec):
    g = geometry(spec)
    assert all(len(lp) in (0, 3) for lp in g.line_points)
    assert all(len(ls) >= 2 for ls in g.point_lines)


def test_projective_planes_in_linear_case():
    g = geometry(SL4)
    l, m = next((g.lines[a], g.lines[b]) for ls in g.point_lines for a, b in combinations(ls, 2))
    assert plane_type(g, l, m).kind is PlaneKind.PROJECTIVE


def test_dual_affine_missing_point_is_form_radical():
    g = geometry(SP6)
    form = family(SP6).form
    for pt in list(plane_census(g).values())[:50]:
        assert pt.kind is PlaneKind.DUAL_AFFINE
        w = pt.span.nonzero_vectors()
        rad = [v for v in w if all(form(v, x) == 0 for x in w)]
        assert rad == [pt.missing_point]


def test_plane_type_rejects_disjoint_lines():
    g = geometry(SP6)
    l = g.lines[0]
    m = next(x for x in g.lines if (l & x).dim == 0)
    with pytest.raises(PreconditionError):
        plane_type(g, l, m)
    with pytest.raises(PreconditionError):
        plane_type(g, l, l)


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_planes_have_exact_counts_and_never_mix(spec):
    g = geometry(spec)
    if not g.points:
        return
    kinds = set()
    for pt in plane_census(g).values():
        lines_in = g.lines_in(pt.span)
        pts = {v for i in lines_in for v in g.line_points[i]}
        if pt.kind is PlaneKind.PROJECTIVE:
            assert (len(pts), len(lines_in)) == (7, 7)
        else:
            assert (len(pts), len(lines_in)) == (6, 4)
        kinds.add(pt.kind)
    assert len(kinds) == 1


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: s.label)
def test_diameter_at_most_two(spec):
    g = geometry(spec)
    if g.points:
        comps, diam = connectivity(g)
        assert comps == 1 and diam <= 2


def test_connectivity_examples():
    assert connectivity(geometry(SP6)) == (1, 2)
    # the Fano plane: any two points on a line
    assert connectivity(geometry(SL3)) == (1, 1)
    tiny = build_geometry([Subspace.span([1, 2], 3)])
    with pytest.raises(PreconditionError):
        connectivity(tiny)


def test_two_commuting_blocks_disconnect():
    gens = []
    for off in (0, 3):
        for i in (0, 1):
            rows = [1 << k for k in range(6)]
            a, b = off + i, off + i + 1
            rows[a], rows[b] = 1 << b, (1 << a) | (1 << b)
            gens.append(BitMatrix(tuple(rows), 6))
    g = closure(gens)
    seed_class = build_class(gens, gens[0], g)
    other = build_class(gens, gens[2], g)
    geom = build_geometry(seed_class.lines + other.lines)
    assert connectivity(geom)[0] == 2


def test_perp_radical_trivial_for_nondegenerate_forms():
    assert perp_radical(geometry(SP6)).dim == 0
    assert perp_radical(geometry(OMINUS6)).dim == 0


def test_perp_radical_of_degenerate_form():
    fam = make_family(FamilySpec.degenerate_symplectic(5))
    g = build_geometry(build_class(fam.generators, fam.seed))
    rad = perp_radical(g)
    assert fam.form.radical() <= rad and rad.dim >= 1


@pytest.mark.parametrize("spec", [SP4, SP6, OPLUS6, OMINUS6, T5, T7, SL3, SL4], ids=lambda s: s.label)
def test_equivalence_classes_are_singletons(spec):
    assert all(len(c) == 1 for c in equiv_classes(geometry(spec)))


def test_equivalence_class_with_centralizer():
    fam = make_family(FamilySpec.degenerate_symplectic(5))
    g = build_geometry(build_class(fam.generators, fam.seed))
    (r,) = fam.form.radical().basis
    nontrivial = [c for c in equiv_classes(g) if len(c) > 1]
    assert nontrivial
    assert all(len(c) == 2 and c[0] ^ c[1] == r for c in nontrivial)


def test_single_line_geometry():
    line = Subspace.span([1, 2], 3)
    g = build_geometry([line])
    assert g.points == ()
    assert equiv_classes(g) == []


@pytest.mark.parametrize("spec", [SP4, OMINUS6, T7, SL4], ids=lambda s: s.label)
def test_transport_along_paths(spec):
    g = geometry(spec)
    d = dclass(spec)
    for dst in range(0, len(g.lines), max(1, len(g.lines) // 10)):
        t = transport_path(g, d, 0, dst)
        assert g.lines[0].image(t) == g.lines[dst]


@pytest.mark.parametrize("spec", [SP4, OMINUS6, T7, SL3], ids=lambda s: s.label)
def test_single_class_transitive_on_points(spec):
    from gf2order3.group import check_hypotheses

    d = dclass(spec)
    assert d.is_single_class
    assert check_hypotheses(family(spec).generators, d).line_orbit_count == 1
    g = geometry(spec)
    pts = set(g.points)
    orbit = {g.points[0]}
    frontier = list(orbit)
    while frontier:
        v = frontier.pop()
        for x in family(spec).generators:
            w = x.apply(v)
            assert w in pts
            if w not in orbit:
                orbit.add(w)
                frontier.append(w)
    assert orbit == pts
