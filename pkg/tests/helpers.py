"""Cached constructions shared across test modules."""

from __future__ import annotations

from functools import lru_cache

from gf2order3.classifier import classify
from gf2order3.families import FamilySpec, make_family
from gf2order3.geometry import build_geometry
from gf2order3.group import build_class, closure

SP4 = FamilySpec.symplectic(4)
SP6 = FamilySpec.symplectic(6)
OPLUS6 = FamilySpec.orthogonal(6, 1)
OMINUS6 = FamilySpec.orthogonal(6, -1)
T5 = FamilySpec.alternating(5, False)
T6Q = FamilySpec.alternating(6, True)
T7 = FamilySpec.alternating(7, False)
T8Q = FamilySpec.alternating(8, True)
SL3 = FamilySpec.transvection(3)
SL4 = FamilySpec.transvection(4)
F4R2 = FamilySpec.f4_reflection(2)
F4R3 = FamilySpec.f4_reflection(3)
GU3 = FamilySpec.f4_unitary(3)
SEVEN3 = FamilySpec.frobenius()
ALT7 = FamilySpec.alt7()

# families small enough to enumerate exhaustively in every property test
SMALL = [SL3, SL4, SEVEN3, ALT7, SP4, OPLUS6, OMINUS6, T5, T6Q, T7, T8Q, F4R2, GU3]


@lru_cache(maxsize=None)
def family(spec: FamilySpec):
    return make_family(spec)


@lru_cache(maxsize=None)
def group(spec: FamilySpec):
    return closure(family(spec).generators)


@lru_cache(maxsize=None)
def dclass(spec: FamilySpec):
    fam = family(spec)
    return build_class(fam.generators, fam.seed, group(spec))


@lru_cache(maxsize=None)
def geometry(spec: FamilySpec):
    return build_geometry(dclass(spec))


@lru_cache(maxsize=None)
def report(spec: FamilySpec):
    fam = family(spec)
    return classify(fam.generators, fam.seed)
