"""Generator sets for every family of the classification, plus controls.

Each constructor returns a :class:`Family`: generators that lie in one
conjugacy class of elements of order 3 with 2-dimensional commutator, a
seed element of that class, and the ground truth (forms, F4 structure)
that the recognizer is expected to recover.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import f4
from .errors import CapExceeded, InvariantViolation, PreconditionError
from .forms import (
    QuadraticForm,
    SymplecticForm,
    order_alt,
    order_gl,
    order_gl4,
    order_gu,
    order_omega,
    order_sp,
)
from .gf2 import BitMatrix, BitVector, parity
from .group import closure, conjugation_orbit

__all__ = [
    "CaseTag",
    "FamilySpec",
    "Family",
    "make_transvection",
    "make_d_element",
    "make_family",
    "make_7_3",
    "make_a7_in_gl4",
    "block_element",
    "standard_matrix",
    "acceptance_specs",
    "alternating_model",
    "permutation_matrix",
    "f4_reflection",
    "unitary_reflection",
    "hermitian",
]

GREEDY_CAP = 1 << 22


class CaseTag(enum.Enum):
    TRANSVECTION_TV = "TransvectionTV"
    FROBENIUS_7_3 = "Frobenius7_3"
    ALT7_IN_GL4 = "Alt7inGL4"
    SYMPLECTIC = "Symplectic"
    ORTHOGONAL = "Orthogonal"
    ALTERNATING = "Alternating"
    F4_REFLECTION = "F4Reflection"
    F4_UNITARY = "F4Unitary"
    # negative controls
    DEGENERATE_SYMPLECTIC = "DegenerateSymplectic"
    FIXED_BLOCK = "FixedBlock"
    SWAPPED_BLOCKS = "SwappedBlocks"


_BRANCH = {
    CaseTag.TRANSVECTION_TV: "a",
    CaseTag.FROBENIUS_7_3: "b",
    CaseTag.ALT7_IN_GL4: "c",
    CaseTag.SYMPLECTIC: "d",
    CaseTag.ORTHOGONAL: "e",
    CaseTag.ALTERNATING: "f",
    CaseTag.F4_REFLECTION: "g",
    CaseTag.F4_UNITARY: "h",
}


@dataclass(frozen=True)
class FamilySpec:
    """Which family to build.  ``dimension`` is always the GF(2)-dimension."""

    case_tag: CaseTag
    dimension: int
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        _validate(self)

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)

    # convenience constructors
    @classmethod
    def transvection(cls, n: int) -> "FamilySpec":
        return cls(CaseTag.TRANSVECTION_TV, n)

    @classmethod
    def frobenius(cls) -> "FamilySpec":
        return cls(CaseTag.FROBENIUS_7_3, 3)

    @classmethod
    def alt7(cls) -> "FamilySpec":
        return cls(CaseTag.ALT7_IN_GL4, 4)

    @classmethod
    def symplectic(cls, n: int) -> "FamilySpec":
        return cls(CaseTag.SYMPLECTIC, n)

    @classmethod
    def orthogonal(cls, n: int, sign: int) -> "FamilySpec":
        return cls(CaseTag.ORTHOGONAL, n, (("sign", sign),))

    @classmethod
    def alternating(cls, omega_size: int, quotiented: bool) -> "FamilySpec":
        dim = omega_size - 2 if quotiented else omega_size - 1
        return cls(CaseTag.ALTERNATING, dim, (("omega_size", omega_size), ("quotiented", quotiented)))

    @classmethod
    def f4_reflection(cls, k: int) -> "FamilySpec":
        return cls(CaseTag.F4_REFLECTION, 2 * k, (("f4_dim", k),))

    @classmethod
    def f4_unitary(cls, k: int) -> "FamilySpec":
        return cls(CaseTag.F4_UNITARY, 2 * k, (("f4_dim", k),))

    @classmethod
    def degenerate_symplectic(cls, n: int) -> "FamilySpec":
        return cls(CaseTag.DEGENERATE_SYMPLECTIC, n)

    @classmethod
    def fixed_block(cls) -> "FamilySpec":
        return cls(CaseTag.FIXED_BLOCK, 4)

    @classmethod
    def swapped_blocks(cls) -> "FamilySpec":
        return cls(CaseTag.SWAPPED_BLOCKS, 6)

    @property
    def expected_branch(self) -> Optional[str]:
        """Branch letter the classifier should report, None for controls.

        Below dimension 6 the symplectic and elliptic geometries coincide
        with triangular ones and are reported as alternating groups.
        """
        tag = self.case_tag
        if tag in (CaseTag.SYMPLECTIC, CaseTag.ORTHOGONAL) and self.dimension < 6:
            return "f"
        if tag is CaseTag.ALTERNATING and not self.param("quotiented") and self.param("omega_size") % 2 == 0:
            return None
        return _BRANCH.get(tag)

    @property
    def label(self) -> str:
        extra = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.case_tag.value}(dim={self.dimension}{',' + extra if extra else ''})"


def _validate(spec: FamilySpec) -> None:
    tag, n = spec.case_tag, spec.dimension
    bad = None
    if tag is CaseTag.TRANSVECTION_TV and n < 3:
        bad = "needs dimension >= 3"
    elif tag is CaseTag.FROBENIUS_7_3 and n != 3:
        bad = "lives in dimension 3"
    elif tag is CaseTag.ALT7_IN_GL4 and n != 4:
        bad = "lives in dimension 4"
    elif tag is CaseTag.SYMPLECTIC and (n < 4 or n % 2):
        bad = "needs even dimension >= 4"
    elif tag is CaseTag.ORTHOGONAL:
        sign = spec.param("sign")
        if sign not in (1, -1):
            bad = "sign must be +1 or -1"
        elif n % 2 or n < 4 or (n == 4 and sign == 1):
            bad = "needs even dimension >= 6 (or 4 for the minus type)"
    elif tag is CaseTag.ALTERNATING:
        k = spec.param("omega_size")
        quot = spec.param("quotiented")
        if not isinstance(k, int) or k < 5:
            bad = "omega_size must be >= 5"
        elif quot and k % 2:
            bad = "the quotient by the all-one vector needs even omega_size"
        elif n != (k - 2 if quot else k - 1):
            bad = "dimension inconsistent with omega_size"
    elif tag is CaseTag.F4_REFLECTION:
        k = spec.param("f4_dim")
        if not isinstance(k, int) or k < 2 or n != 2 * k:
            bad = "needs f4_dim >= 2 and dimension 2*f4_dim"
    elif tag is CaseTag.F4_UNITARY:
        k = spec.param("f4_dim")
        if not isinstance(k, int) or k < 3 or n != 2 * k:
            bad = "needs f4_dim >= 3 and dimension 2*f4_dim"
    elif tag is CaseTag.DEGENERATE_SYMPLECTIC and (n < 5 or n % 2 == 0):
        bad = "needs odd dimension >= 5"
    elif tag is CaseTag.FIXED_BLOCK and n != 4:
        bad = "lives in dimension 4"
    elif tag is CaseTag.SWAPPED_BLOCKS and n != 6:
        bad = "lives in dimension 6"
    if bad:
        raise PreconditionError(f"{tag.value}: {bad}")


@dataclass(frozen=True)
class Family:
    spec: FamilySpec
    generators: tuple[BitMatrix, ...]
    seed: BitMatrix
    form: Optional[SymplecticForm] = None
    quadratic: Optional[QuadraticForm] = None
    j_operator: Optional[BitMatrix] = None
    hermitian: Optional[tuple[tuple[int, ...], ...]] = None
    expected_order: Optional[int] = None
    notes: dict = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------------------
# elementary constructions


def _bits(x) -> int:
    return x.bits if isinstance(x, BitVector) else int(x)


def make_transvection(v, phi, n: Optional[int] = None) -> BitMatrix:
    """``w -> w + phi(w) v``; ``phi`` is given by its coefficient vector."""
    if n is None:
        n = v.n
    vb, pb = _bits(v), _bits(phi)
    if not vb or not pb:
        raise PreconditionError("v and phi must be nonzero")
    if parity(vb & pb):
        raise PreconditionError("phi(v) must be 0")
    return BitMatrix(tuple((1 << i) ^ (vb if (pb >> i) & 1 else 0) for i in range(n)), n)


def make_d_element(v, w, phi, psi, n: Optional[int] = None) -> BitMatrix:
    """``t_{v,phi} t_{w,psi}``: apply ``t_{v,phi}`` first (right action)."""
    vb, wb, pb, qb = (_bits(x) for x in (v, w, phi, psi))
    if parity(vb & pb) or parity(wb & qb) or not parity(vb & qb) or not parity(wb & pb):
        raise PreconditionError("need phi(v) = psi(w) = 0 and psi(v) = phi(w) = 1")
    if n is None:
        n = v.n
    return make_transvection(vb, pb, n) @ make_transvection(wb, qb, n)


def block_element(n: int, i: int = 0, j: int = 1) -> BitMatrix:
    """Identity except ``e_i -> e_j``, ``e_j -> e_i + e_j`` (order 3)."""
    rows = [1 << k for k in range(n)]
    rows[i] = 1 << j
    rows[j] = (1 << i) | (1 << j)
    return BitMatrix(tuple(rows), n)


def standard_matrix(n: int) -> BitMatrix:
    """The standard order-3 element: the block [[0,1],[1,1]] then identity."""
    return block_element(n, 0, 1)


def _sort(ms: Iterable[BitMatrix]) -> list[BitMatrix]:
    return sorted(set(ms), key=lambda m: m.key)


def _greedy(candidates: Sequence[BitMatrix], target: Optional[int]) -> list[BitMatrix]:
    """Keep candidates that enlarge the generated group until ``target``.

    With ``target`` None the full candidate list's closure defines it.
    Too-large targets skip the pruning and keep every candidate.
    """
    if target is None:
        target = closure(candidates, cap=GREEDY_CAP).order
    if target > GREEDY_CAP:
        return list(candidates)
    gens: list[BitMatrix] = []
    group = None
    for c in candidates:
        if group is not None and c in group:
            continue
        gens.append(c)
        group = closure(gens, cap=GREEDY_CAP)
        if group.order == target:
            return gens
    raise InvariantViolation(f"candidates generate order {group.order if group else 1}, expected {target}")


# ---------------------------------------------------------------------------
# families


def _transvection_tv(spec: FamilySpec) -> Family:
    n = spec.dimension
    gens = tuple(block_element(n, i, i + 1) for i in range(n - 1))
    return Family(spec, gens, gens[0], expected_order=order_gl(n))


def make_7_3() -> Family:
    """7:3 in GL(3,2) via GF(8) = GF(2)[x]/(x^3+x+1) on the basis 1, x, x^2.

    The Frobenius ``y -> y^2`` has order 3 and fixes only GF(2); its
    conjugate under multiplication by ``x`` completes a generating pair.
    """
    mult_x = BitMatrix((0b010, 0b100, 0b011), 3)
    frob = BitMatrix((0b001, 0b100, 0b110), 3)
    gens = (frob, frob.conjugate(mult_x))
    return Family(FamilySpec.frobenius(), gens, frob, expected_order=21, notes={"multiplier": mult_x})


def make_a7_in_gl4() -> Family:
    """A7 inside GL(4,2) ~ A8 as a subgroup generated by two class elements.

    The first generator is the standard element; the second is the
    smallest (by packed key) conjugate in GL(4,2) such that the pair
    generates a group of order 2520.  The search is deterministic and the
    result is certified by the closure order.
    """
    n = 4
    d0 = standard_matrix(n)
    sl_gens = [block_element(n, i, i + 1) for i in range(n - 1)]
    for k in conjugation_orbit(d0, sl_gens):
        e = BitMatrix.from_key(int(k), n)
        if closure([d0, e]).order == 2520:
            return Family(FamilySpec.alt7(), (d0, e), d0, expected_order=2520)
    raise InvariantViolation("no A7 found in GL(4,2)")


def _ordered_vectors(n: int) -> list[int]:
    return sorted(range(1, 1 << n), key=lambda v: (v.bit_count(), v))


def _star_generators(form: SymplecticForm, points: Sequence[int]) -> list[BitMatrix]:
    """``t_p t_w`` for the first point ``p`` and every point ``w`` with f(p,w)=1."""
    p = points[0]
    tp = form.transvection(p)
    return [tp @ form.transvection(w) for w in points if form(p, w)]


def _symplectic(spec: FamilySpec) -> Family:
    n = spec.dimension
    form = SymplecticForm.standard(n)
    target = 360 if n == 4 else order_sp(n)
    gens = _greedy(_star_generators(form, _ordered_vectors(n)), target)
    return Family(spec, tuple(gens), gens[0], form=form, expected_order=target)


def _orthogonal(spec: FamilySpec) -> Family:
    n, sign = spec.dimension, spec.param("sign")
    q = QuadraticForm.plus(n) if sign == 1 else QuadraticForm.minus(n)
    points = [v for v in _ordered_vectors(n) if q(v)]
    target = order_omega(n, sign)
    gens = _greedy(_star_generators(q.bilinear, points), target)
    return Family(spec, tuple(gens), gens[0], form=q.bilinear, quadratic=q, expected_order=target)


def _degenerate_symplectic(spec: FamilySpec) -> Family:
    n = spec.dimension
    form = SymplecticForm.standard(n)
    gens = _greedy(_star_generators(form, _ordered_vectors(n)), None)
    return Family(spec, tuple(gens), gens[0], form=form)


def alternating_model(omega_size: int, quotiented: bool):
    """Coordinates for EF2(Omega) (or its quotient by the all-one vector).

    Basis ``u_i = w_0 + w_i``; in the quotient ``u_{k-1}`` is dropped since
    it equals the sum of the others.  Returns ``(dim, pair_vector)`` where
    ``pair_vector(a, b)`` gives the coordinates of ``w_a + w_b``.
    """
    k = omega_size
    dim = k - 2 if quotiented else k - 1
    full = (1 << dim) - 1

    def u(i: int) -> int:
        if i == 0:
            return 0
        if quotiented and i == k - 1:
            return full
        return 1 << (i - 1)

    def pair_vector(a: int, b: int) -> int:
        return u(a) ^ u(b)

    return dim, pair_vector


def permutation_matrix(perm: Sequence[int], omega_size: int, quotiented: bool) -> BitMatrix:
    """Action of a permutation of Omega on the chosen coordinates."""
    dim, pv = alternating_model(omega_size, quotiented)
    rows = tuple(pv(perm[0], perm[i]) for i in range(1, dim + 1))
    return BitMatrix(rows, dim)


def _three_cycle(k: int, a: int, b: int, c: int) -> list[int]:
    perm = list(range(k))
    perm[a], perm[b], perm[c] = b, c, a
    return perm


def _alternating(spec: FamilySpec) -> Family:
    k, quot = spec.param("omega_size"), spec.param("quotiented")
    dim, pv = alternating_model(k, quot)
    gens = tuple(permutation_matrix(_three_cycle(k, 0, 1, c), k, quot) for c in range(2, k))
    # dot product on EF2(Omega): pairs meeting in one index pair to 1
    basis = [pv(0, i) for i in range(1, dim + 1)]
    labels = {(a, b): pv(a, b) for a, b in combinations(range(k), 2)}
    gram_rows = []
    for i in range(1, dim + 1):
        row = 0
        for j in range(1, dim + 1):
            if i != j:
                row |= 1 << (j - 1)
        gram_rows.append(row)
    form = SymplecticForm(BitMatrix(tuple(gram_rows), dim))
    del basis
    return Family(
        spec,
        gens,
        gens[0],
        form=form,
        expected_order=order_alt(k),
        notes={"pair_vectors": labels},
    )


def f4_reflection(v: Sequence[int], phi: Sequence[int]) -> BitMatrix:
    """``w -> w - phi(w) v`` on F4^k; needs ``phi(v)`` outside {0, 1}."""
    if f4.dot(phi, v) in (0, 1):
        raise PreconditionError("phi(v) must be w or w^2")
    k = len(v)
    m = [[(1 if i == j else 0) ^ f4.mul(phi[i], v[j]) for j in range(k)] for i in range(k)]
    return f4.to_bitmatrix(m)


def hermitian(u: Sequence[int], v: Sequence[int]) -> int:
    """Standard Hermitian form ``sum u_i conj(v_i)``."""
    return f4.dot(u, [f4.conj(x) for x in v])


def unitary_reflection(v: Sequence[int], alpha: int = f4.W) -> BitMatrix:
    """``w -> w + alpha h(w,v) v`` for the standard Hermitian form."""
    k = len(v)
    m = [[(1 if i == j else 0) ^ f4.mul(f4.mul(alpha, f4.conj(v[i])), v[j]) for j in range(k)] for i in range(k)]
    return f4.to_bitmatrix(m)


def _f4_reflection_family(spec: FamilySpec) -> Family:
    k = spec.param("f4_dim")
    vecs = list(f4.all_vectors(k))
    cands = _sort(f4_reflection(v, phi) for v in vecs for phi in vecs if f4.dot(phi, v) == f4.W)
    target = order_gl4(k)
    gens = _greedy(cands, target)
    return Family(spec, tuple(gens), gens[0], j_operator=f4.scalar_operator(k), expected_order=target)


def _f4_unitary_family(spec: FamilySpec) -> Family:
    k = spec.param("f4_dim")
    cands = _sort(unitary_reflection(v) for v in f4.all_vectors(k) if any(v) and hermitian(v, v) == 1)
    target = order_gu(k)
    gens = _greedy(cands, target)
    ident = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    return Family(
        spec, tuple(gens), gens[0], j_operator=f4.scalar_operator(k), hermitian=ident, expected_order=target
    )


def _fixed_block(spec: FamilySpec) -> Family:
    d = standard_matrix(4)
    return Family(spec, (d,), d, expected_order=3)


def _swapped_blocks(spec: FamilySpec) -> Family:
    """SL(3,2) x SL(3,2) on GF(2)^3 + GF(2)^3 extended by the block swap."""
    gens = [block_element(6, 0, 1), block_element(6, 1, 2)]
    swap = BitMatrix(tuple(1 << ((i + 3) % 6) for i in range(6)), 6)
    gens.append(swap)
    return Family(spec, tuple(gens), gens[0], expected_order=168 * 168 * 2)


_BUILDERS = {
    CaseTag.TRANSVECTION_TV: _transvection_tv,
    CaseTag.FROBENIUS_7_3: lambda spec: make_7_3(),
    CaseTag.ALT7_IN_GL4: lambda spec: make_a7_in_gl4(),
    CaseTag.SYMPLECTIC: _symplectic,
    CaseTag.ORTHOGONAL: _orthogonal,
    CaseTag.ALTERNATING: _alternating,
    CaseTag.F4_REFLECTION: _f4_reflection_family,
    CaseTag.F4_UNITARY: _f4_unitary_family,
    CaseTag.DEGENERATE_SYMPLECTIC: _degenerate_symplectic,
    CaseTag.FIXED_BLOCK: _fixed_block,
    CaseTag.SWAPPED_BLOCKS: _swapped_blocks,
}


def make_family(spec: FamilySpec) -> Family:
    return _BUILDERS[spec.case_tag](spec)


def acceptance_specs() -> list[FamilySpec]:
    """The desk-scale matrix every classification run is checked against."""
    specs = [FamilySpec.transvection(n) for n in range(3, 7)]
    specs += [FamilySpec.frobenius(), FamilySpec.alt7(), FamilySpec.symplectic(6)]
    specs += [FamilySpec.orthogonal(6, 1), FamilySpec.orthogonal(6, -1)]
    for k in range(5, 9):
        specs.append(FamilySpec.alternating(k, quotiented=k % 2 == 0))
    specs += [FamilySpec.f4_reflection(2), FamilySpec.f4_reflection(3), FamilySpec.f4_unitary(3)]
    return specs
