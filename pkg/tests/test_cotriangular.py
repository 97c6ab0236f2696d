from __future__ import annotations

import random

import pytest

from gf2order3.cotriangular import (
    CotriangularKind,
    classify_cotriangular,
    identify_group,
    recognize_triangular,
    recover_symplectic,
)
from gf2order3.errors import InvariantViolation, PreconditionError
from gf2order3.gf2 import BitMatrix, Subspace
from gf2order3.geometry import build_geometry

from helpers import OMINUS6, OPLUS6, SP4, SP6, T5, T6Q, T7, T8Q, family, geometry, group

COTRI = [SP4, SP6, OPLUS6, OMINUS6, T5, T6Q, T7, T8Q]


@pytest.mark.parametrize("spec", COTRI, ids=lambda s: s.label)
def test_recovered_form_matches_collinearity(spec):
    g = geometry(spec)
    rec = recover_symplectic(g)
    pts = g.points
    for p in pts:
        for q in pts:
            assert rec.form(p, q) == g.collinear(p, q)
    assert rec.form.change_basis(rec.basis) == rec.point_gram


def test_recovered_symplectic_form_is_the_construction():
    rec = recover_symplectic(geometry(SP6))
    assert rec.form == family(SP6).form


def test_recovered_form_congruent_via_base_change():
    rec = recover_symplectic(geometry(SP6))
    truth = family(SP6).form
    assert truth.change_basis(rec.basis) == rec.point_gram


def test_recover_symplectic_needs_spanning_points():
    g = geometry(SP6)
    inner = Subspace.span([1, 2, 4, 8], 6)
    trimmed = build_geometry([l for l in g.lines if l <= inner])
    assert trimmed.points
    with pytest.raises(PreconditionError):
        recover_symplectic(trimmed)


def test_orthogonal_family_recovers_bilinear_form():
    rec = recover_symplectic(geometry(OMINUS6))
    assert rec.form == family(OMINUS6).form


def test_pair_model_dot_product():
    rec = recover_symplectic(geometry(T5))
    tri = recognize_triangular(geometry(T5))
    vec = tri.vector_of()
    for (a, b), v in vec.items():
        for (c, d), w in vec.items():
            if (a, b) != (c, d):
                assert rec.form(v, w) == (len({a, b} & {c, d}) == 1)


def test_symplectic_six_classified():
    res = classify_cotriangular(geometry(SP6))
    assert res.kind is CotriangularKind.SP and res.verified == (CotriangularKind.SP,)
    assert len(geometry(SP6).points) == 2**6 - 1
    ident = identify_group(res, res.kind, group(SP6).order)
    assert (ident.name, ident.formula_order, ident.matches) == ("Sp(6,2)", 1451520, True)


def test_elliptic_six_classified():
    res = classify_cotriangular(geometry(OMINUS6))
    assert res.kind is CotriangularKind.ORTHOGONAL
    q = res.quadratic
    truth = family(OMINUS6).quadratic
    assert all(q(v) == truth(v) for v in range(64))
    ident = identify_group(res, res.kind, group(OMINUS6).order)
    assert (ident.name, ident.formula_order) == ("Omega-(6,2)", 25920)


def test_pair_seven_classified():
    res = classify_cotriangular(geometry(T7))
    assert res.kind is CotriangularKind.TRIANGULAR
    assert res.triangular.omega_size == 7 and not res.triangular.quotiented
    ident = identify_group(res, res.kind, group(T7).order)
    assert (ident.name, ident.formula_order) == ("Alt(7)", 2520)


def test_pair_model_quotient_inferred_from_dimension():
    tri = recognize_triangular(geometry(T6Q))
    assert tri.omega_size == 6 and tri.quotiented and "quotient" in tri.inference


@pytest.mark.parametrize(
    "spec,verified,chosen",
    [
        (SP4, ("Sp", "Triangular"), "Triangular"),
        (T5, ("Orthogonal", "Triangular"), "Triangular"),
        (OPLUS6, ("Orthogonal", "Triangular"), "Orthogonal"),
        (T8Q, ("Orthogonal", "Triangular"), "Orthogonal"),
        (T7, ("Triangular",), "Triangular"),
    ],
    ids=lambda x: getattr(x, "label", str(x)),
)
def test_small_coincidences_listed(spec, verified, chosen):
    res = classify_cotriangular(geometry(spec))
    assert tuple(k.value for k in res.verified) == verified
    assert res.chosen().value == chosen


def test_identify_group_rejects_order_mismatch():
    res = classify_cotriangular(geometry(SP6))
    with pytest.raises(InvariantViolation):
        identify_group(res, res.kind, 12345)


@pytest.mark.parametrize("spec", [OPLUS6, OMINUS6, T5], ids=lambda s: s.label)
def test_polarization_identity(spec):
    res = classify_cotriangular(geometry(spec))
    q = res.quadratic
    n = q.dim
    for u in range(1 << n):
        for v in range(1 << n):
            assert q(u ^ v) ^ q(u) ^ q(v) == q.bilinear(u, v)


@pytest.mark.parametrize("spec", COTRI, ids=lambda s: s.label)
def test_recovered_forms_are_invariant(spec):
    res = classify_cotriangular(geometry(spec))
    gens = family(spec).generators
    assert all(res.recovery.form.is_invariant(g) for g in gens)
    if res.quadratic is not None:
        assert all(res.quadratic.is_invariant(g) for g in gens)


@pytest.mark.parametrize("spec", COTRI, ids=lambda s: s.label)
def test_pair_lines_equal_class_lines(spec):
    g = geometry(spec)
    tri = recognize_triangular(g)
    if tri is None:
        return
    vec = tri.vector_of()
    k = tri.omega_size
    from itertools import combinations

    model = {tuple(sorted((vec[(a, b)], vec[(b, c)], vec[(a, c)]))) for a, b, c in combinations(range(k), 3)}
    assert model == {g.line_vectors[i] for i, lp in enumerate(g.line_points) if lp}


@pytest.mark.parametrize("spec", [SP6, OMINUS6, T7], ids=lambda s: s.label)
def test_recognition_stable_under_basis_change(spec):
    from gf2order3.group import build_class

    rng = random.Random(3)
    fam = family(spec)
    n = fam.seed.nrows
    while True:
        b = BitMatrix(tuple(rng.randrange(1, 1 << n) for _ in range(n)), n)
        if b.is_invertible():
            break
    gens = [x.conjugate(b) for x in fam.generators]
    d = build_class(gens, fam.seed.conjugate(b))
    res = classify_cotriangular(build_geometry(d))
    base = classify_cotriangular(geometry(spec))
    assert res.verified == base.verified
    assert res.chosen() == base.chosen()
