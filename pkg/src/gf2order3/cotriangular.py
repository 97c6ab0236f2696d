"""Recognition of geometries whose planes are all dual affine.

Three models are tried, each by explicit reconstruction followed by a full
check against the point set and collinearity: all nonzero vectors with a
symplectic form, the nonsingular vectors of a quadratic form, and pairs
of an index set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from math import isqrt
from typing import Optional

import networkx as nx

from .errors import InvariantViolation, PreconditionError, RecoveryFailed
from .forms import QuadraticForm, SymplecticForm, order_alt, order_omega, order_sp
from .geometry import Geometry, line_key
from .gf2 import BitMatrix, BitVector, Subspace, parity, vec_mat

__all__ = [
    "SymplecticRecovery",
    "TriangularModel",
    "CotriangularKind",
    "CotriangularResult",
    "GroupIdentity",
    "recover_symplectic",
    "recover_quadratic",
    "recognize_triangular",
    "classify_cotriangular",
    "identify_group",
]


@dataclass(frozen=True)
class SymplecticRecovery:
    """A form with the base change that produced it.

    ``basis`` holds the chosen points as rows and ``point_gram`` their
    collinearity matrix, so ``form.change_basis(basis) == point_gram``.
    """

    form: SymplecticForm
    basis: BitMatrix
    point_gram: BitMatrix


def _point_basis(geom: Geometry) -> list[int]:
    rows: list[int] = []
    span = Subspace.zero(geom.n)
    for p in geom.points:
        if p not in span:
            rows.append(p)
            span = span + Subspace.span((p,), geom.n)
            if span.dim == geom.n:
                break
    return rows


def recover_symplectic(geom: Geometry) -> SymplecticRecovery:
    """Form with ``f(p, q) = 1`` exactly when distinct points are collinear."""
    basis = _point_basis(geom)
    n = geom.n
    if len(basis) != n:
        raise PreconditionError("points do not span the space")
    a_rows = []
    for i, p in enumerate(basis):
        row = 0
        for j, q in enumerate(basis):
            if geom.collinear(p, q):
                row |= 1 << j
        a_rows.append(row)
    b = BitMatrix(tuple(basis), n)
    a = BitMatrix(tuple(a_rows), n)
    binv = b.inverse()
    form = SymplecticForm(binv @ a @ binv.transpose())
    for p, q in combinations(geom.points, 2):
        if form(p, q) != geom.collinear(p, q):
            raise RecoveryFailed("collinearity is not described by a bilinear form")
    return SymplecticRecovery(form, b, a)


def recover_quadratic(geom: Geometry, form: SymplecticForm) -> Optional[QuadraticForm]:
    """``Q`` with ``Q = 1`` on a point basis, polarizing to ``form``.

    Returns None unless the points are exactly the vectors with ``Q = 1``
    and ``Q`` has trivial radical.
    """
    basis = _point_basis(geom)
    n = geom.n
    binv = BitMatrix(tuple(basis), n).inverse()
    fb = [[form(p, q) for q in basis] for p in basis]

    def q_point_coords(c: int) -> int:
        val = parity(c)
        idx = [i for i in range(n) if (c >> i) & 1]
        for i, j in combinations(idx, 2):
            val ^= fb[i][j]
        return val

    values = 0
    for k in range(n):
        if q_point_coords(vec_mat(1 << k, binv.rows)):
            values |= 1 << k
    q = QuadraticForm(BitVector(n, values), form)
    if set(q.nonsingular_vectors()) != set(geom.points):
        return None
    rad = form.radical()
    if any(q(v) == 0 for v in rad.nonzero_vectors()):
        return None
    return q


@dataclass(frozen=True)
class TriangularModel:
    """Points labelled by unordered pairs of ``range(omega_size)``."""

    omega_size: int
    point_labels: tuple[tuple[int, tuple[int, int]], ...]
    quotiented: bool
    inference: str

    def label_map(self) -> dict[int, tuple[int, int]]:
        return dict(self.point_labels)

    def vector_of(self) -> dict[tuple[int, int], int]:
        return {lab: v for v, lab in self.point_labels}


def recognize_triangular(geom: Geometry) -> Optional[TriangularModel]:
    """Recover an index set from the maximal cliques of the collinearity graph.

    In the pair model the cliques of size ``k - 1`` are the stars of the
    indices, and every point lies in exactly two of them.  The labelling is
    then checked against collinearity, the line set and linearity of the
    map from pairs to vectors.
    """
    npts = len(geom.points)
    k = (1 + isqrt(1 + 8 * npts)) // 2
    if k * (k - 1) // 2 != npts or k < 5:
        return None
    stars = sorted(
        (tuple(sorted(c)) for c in nx.find_cliques(geom.graph) if len(c) == k - 1),
    )
    if len(stars) != k:
        return None
    member: dict[int, list[int]] = {p: [] for p in geom.points}
    for idx, c in enumerate(stars):
        for p in c:
            member[p].append(idx)
    if any(len(v) != 2 for v in member.values()):
        return None
    labels = {p: (v[0], v[1]) for p, v in member.items()}
    if len(set(labels.values())) != npts:
        return None
    for p, q in combinations(geom.points, 2):
        share = len(set(labels[p]) & set(labels[q])) == 1
        if share != geom.collinear(p, q):
            return None
    vec = {lab: p for p, lab in labels.items()}
    expected = {line_key((vec[(a, b)], vec[(b, c)])) for a, b, c in combinations(range(k), 3)}
    actual = {geom.line_vectors[i] for i, lp in enumerate(geom.line_points) if lp}
    if expected != actual:
        return None
    u = [0] + [vec[(0, i)] for i in range(1, k)]
    if any(vec[(a, b)] != u[a] ^ u[b] for a, b in combinations(range(1, k), 2)):
        return None
    rank = Subspace.span(u[1:], geom.n).dim
    total = 0
    for x in u[1:]:
        total ^= x
    if rank != geom.n:
        return None
    if rank == k - 1:
        quotiented = False
        inference = f"dim V = {rank} = |Omega| - 1: full even-weight module"
    elif rank == k - 2 and k % 2 == 0 and total == 0:
        quotiented = True
        inference = f"dim V = {rank} = |Omega| - 2: quotient by the all-one vector"
    else:
        return None
    labelled = tuple(sorted(labels.items()))
    return TriangularModel(k, labelled, quotiented, inference)


class CotriangularKind(enum.Enum):
    SP = "Sp"
    ORTHOGONAL = "Orthogonal"
    TRIANGULAR = "Triangular"


PRECEDENCE = (CotriangularKind.SP, CotriangularKind.ORTHOGONAL, CotriangularKind.TRIANGULAR)


@dataclass(frozen=True)
class CotriangularResult:
    recovery: SymplecticRecovery
    verified: tuple[CotriangularKind, ...]
    quadratic: Optional[QuadraticForm]
    triangular: Optional[TriangularModel]

    @property
    def kind(self) -> CotriangularKind:
        """First verified model in the order Sp, Orthogonal, Triangular."""
        return self.verified[0]

    def chosen(self, min_form_dim: int = 6) -> CotriangularKind:
        """Precedence with the small-dimension guard.

        Below ``min_form_dim`` the form models are only accepted when no
        pair model verifies, since small symplectic and elliptic spaces
        coincide with pair geometries.
        """
        if self.recovery.form.dim < min_form_dim and CotriangularKind.TRIANGULAR in self.verified:
            return CotriangularKind.TRIANGULAR
        return self.kind


def classify_cotriangular(geom: Geometry, recovery: Optional[SymplecticRecovery] = None) -> CotriangularResult:
    if recovery is None:
        recovery = recover_symplectic(geom)
    form = recovery.form
    verified = []
    if len(geom.points) == (1 << geom.n) - 1 and form.is_nondegenerate():
        verified.append(CotriangularKind.SP)
    quad = recover_quadratic(geom, form)
    if quad is not None:
        verified.append(CotriangularKind.ORTHOGONAL)
    tri = recognize_triangular(geom)
    if tri is not None:
        verified.append(CotriangularKind.TRIANGULAR)
    if not verified:
        raise InvariantViolation("no dual-affine model verifies")
    return CotriangularResult(recovery, tuple(verified), quad, tri)


@dataclass(frozen=True)
class GroupIdentity:
    name: str
    formula_order: int
    observed_order: Optional[int]

    @property
    def matches(self) -> Optional[bool]:
        if self.observed_order is None:
            return None
        return self.observed_order == self.formula_order


def identify_group(result: CotriangularResult, kind: CotriangularKind, observed: Optional[int]) -> GroupIdentity:
    n = result.recovery.form.dim
    if kind is CotriangularKind.SP:
        ident = GroupIdentity(f"Sp({n},2)", order_sp(n), observed)
    elif kind is CotriangularKind.ORTHOGONAL:
        sign = result.quadratic.witt_sign()
        ident = GroupIdentity(f"Omega{'+' if sign == 1 else '-'}({n},2)", order_omega(n, sign), observed)
    else:
        k = result.triangular.omega_size
        ident = GroupIdentity(f"Alt({k})", order_alt(k), observed)
    if ident.matches is False:
        raise InvariantViolation(f"{ident.name}: order {observed} != {ident.formula_order}")
    return ident
