"""Spreads and F4 structure for classes whose lines pairwise meet trivially.

When no two lines share a point, the 4-spaces spanned by two lines carry
spreads: five 2-spaces partitioning the nonzero vectors.  From the
spreads one recovers the multiplication by a primitive cube root of unity
(a GF(4)-structure) and, when singular lines occur, a Hermitian form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional, Sequence

from . import f4
from .errors import InvariantViolation, PreconditionError, RecoveryFailed
from .geometry import line_key, two_spaces
from .gf2 import BitMatrix, Subspace, kernel, parity, vec_mat
from .group import ClassD, closure, commutator_space, fixed_space

__all__ = [
    "SpreadKind",
    "Spread",
    "SpreadComplex",
    "F4Structure",
    "HermitianModel",
    "find_spreads",
    "singular_involution",
    "spread_space_check",
    "recover_f4",
    "recover_hermitian",
    "f4_coordinates",
]

MAX_COMMUTANT_DIM = 16


class SpreadKind(enum.Enum):
    FULL = "Full"
    TANGENT = "Tangent"
    HYPERBOLIC = "Hyperbolic"
    SINGULAR = "Singular"


_KIND_BY_COUNT = {5: SpreadKind.FULL, 4: SpreadKind.TANGENT, 2: SpreadKind.HYPERBOLIC, 0: SpreadKind.SINGULAR}


@dataclass(frozen=True)
class Spread:
    span: Subspace
    members: tuple[Subspace, ...]
    kind: SpreadKind
    class_lines: tuple[int, ...]
    singular_lines: tuple[int, ...]

    @property
    def singular_line(self) -> Optional[Subspace]:
        """The member outside the class for a tangent spread."""
        if self.kind is not SpreadKind.TANGENT:
            return None
        (h,) = (m for m in self.members if m not in self._class_set)
        return h

    @property
    def _class_set(self) -> frozenset:
        return frozenset(self.members[: len(self.class_lines)])


@dataclass(frozen=True)
class SpreadComplex:
    """All spreads of a class together with its singular lines."""

    lines: tuple[Subspace, ...]
    singular: tuple[Subspace, ...]
    spreads: tuple[Spread, ...]
    structure_checks: dict = field(default_factory=dict, compare=False)

    @property
    def all_lines(self) -> tuple[Subspace, ...]:
        return self.lines + self.singular

    def count(self, kind: SpreadKind) -> int:
        return sum(1 for s in self.spreads if s.kind is kind)

    def census(self) -> dict:
        out = {k.value: self.count(k) for k in SpreadKind}
        out["lines"] = len(self.lines)
        out["singular_lines"] = len(self.singular)
        return out


def _is_partition(w: Subspace, members: Sequence[tuple[int, int, int]]) -> bool:
    covered = [v for m in members for v in m]
    return len(members) == 5 and len(set(covered)) == 15 and set(covered) == set(w.nonzero_vectors())


def find_spreads(dclass: ClassD) -> SpreadComplex:
    """Spreads spanned by pairs of lines, plus the singular lines they expose.

    A pair of class lines ``l = [V,d]``, ``m`` with ``m`` not inside
    ``C_V(d)`` must span a 4-space holding 4 or 5 class lines; with 4 the
    uncovered vectors form the singular line of a tangent spread.  A second
    pass over all pairs of class and singular lines collects hyperbolic and
    singular spreads.
    """
    lines = dclass.lines
    n = dclass.n
    keys = [line_key(l.nonzero_vectors()) for l in lines]
    index = {k: i for i, k in enumerate(keys)}
    pts = {}
    for i, k in enumerate(keys):
        for v in k:
            if v in pts:
                raise PreconditionError("lines share a point")
            pts[v] = i
    reps = {}
    for d, li in zip(dclass, dclass.line_of):
        reps.setdefault(li, d)
    fixed = {li: fixed_space(d) for li, d in reps.items()}

    spaces: dict[Subspace, list[int]] = {}
    for i, j in combinations(range(len(lines)), 2):
        if lines[j] <= fixed[i]:
            continue
        w = lines[i] + lines[j]
        if w.dim != 4:
            raise InvariantViolation("two lines without a common point span less than a 4-space")
        if w in spaces:
            continue
        inside = [index[k] for k in two_spaces(w) if k in index]
        if len(inside) not in (4, 5):
            raise InvariantViolation(f"4-space spanned by two lines holds {len(inside)} lines")
        spaces[w] = inside

    singular_keys: set[tuple[int, int, int]] = set()
    for w, inside in spaces.items():
        if len(inside) == 4:
            rest = set(w.nonzero_vectors()) - {v for i in inside for v in keys[i]}
            a, b, c = sorted(rest)
            if a ^ b != c:
                raise InvariantViolation("uncovered vectors of a tangent 4-space are not a line")
            singular_keys.add((a, b, c))
    singular_list = sorted(singular_keys)
    singular = tuple(Subspace.span(k[:2], n) for k in singular_list)
    sindex = {k: i for i, k in enumerate(singular_list)}

    spreads = []
    seen: set[Subspace] = set()
    all_keys = keys + singular_list
    all_spaces = list(lines) + list(singular)
    for i, j in combinations(range(len(all_keys)), 2):
        w = all_spaces[i] + all_spaces[j]
        if w.dim != 4 or w in seen:
            continue
        seen.add(w)
        twos = two_spaces(w)
        cl = [index[k] for k in twos if k in index]
        sl = [sindex[k] for k in twos if k in sindex]
        members = [keys[c] for c in cl] + [singular_list[s] for s in sl]
        if not _is_partition(w, members):
            continue
        kind = _KIND_BY_COUNT.get(len(cl))
        if kind is None:
            raise InvariantViolation(f"spread with {len(cl)} class lines")
        spreads.append(
            Spread(w, tuple(lines[c] for c in cl) + tuple(singular[s] for s in sl), kind, tuple(cl), tuple(sl))
        )
    spreads.sort(key=lambda s: s.span.basis)
    sc = SpreadComplex(tuple(lines), singular, tuple(spreads))
    sc.structure_checks.update(_structure_checks(sc))
    return sc


def _structure_checks(sc: SpreadComplex) -> dict:
    """Structural facts every spread complex must satisfy."""
    vec_line = {}
    for i, l in enumerate(sc.all_lines):
        for v in l.nonzero_vectors():
            vec_line.setdefault(v, []).append(i)
    disjoint = all(len(v) == 1 for v in vec_line.values())
    meets_ok = True
    for a, b in combinations(sc.spreads, 2):
        common = set(a.members) & set(b.members)
        if len(common) > 1:
            meets_ok = False
            break
    full_excludes = not (sc.count(SpreadKind.FULL) and sc.singular)
    return {
        "lines_and_singular_lines_disjoint": disjoint,
        "spreads_share_at_most_one_member": meets_ok,
        "full_spreads_exclude_singular_lines": full_excludes,
    }


def spread_space_check(sc: SpreadComplex) -> dict:
    """Is (lines, spreads) a projective space with 5 points per line?

    Checks that two points lie on exactly one spread and the Veblen-Young
    axiom: when spreads ``ab`` and ``cd`` meet, so do ``ac`` and ``bd``.
    """
    pts = sc.all_lines
    idx = {p: i for i, p in enumerate(pts)}
    blocks = [frozenset(idx[m] for m in s.members) for s in sc.spreads]
    through: dict[tuple[int, int], int] = {}
    linear = all(len(b) == 5 for b in blocks)
    for bi, b in enumerate(blocks):
        for pair in combinations(sorted(b), 2):
            if pair in through:
                linear = False
            through[pair] = bi
    npts = len(pts)
    linear = linear and len(through) == npts * (npts - 1) // 2

    def join(a: int, b: int) -> Optional[int]:
        return through.get((a, b) if a < b else (b, a))

    veblen = linear
    if linear:
        for b1, b2 in combinations(range(len(blocks)), 2):
            common = blocks[b1] & blocks[b2]
            if len(common) != 1:
                continue
            (x,) = common
            r1 = sorted(blocks[b1] - {x})
            r2 = sorted(blocks[b2] - {x})
            for a, b in combinations(r1, 2):
                for c, d in product(r2, repeat=2):
                    if c == d:
                        continue
                    if not blocks[join(a, c)] & blocks[join(b, d)]:
                        veblen = False
                        break
                if not veblen:
                    break
            if not veblen:
                break
    return {"linear_space": linear, "veblen_young": veblen, "points": npts, "lines": len(blocks)}


def singular_involution(spread: Spread, f: BitMatrix, dclass: ClassD) -> BitMatrix:
    """An involution of ``<D_W>`` with the singular line ``h`` as commutator.

    ``t`` must fix the span ``W`` of the spread pointwise and must not
    centralize ``[V,f]``.  Squares ``(de)^2`` of class elements on the
    spread are tried first, preferring ``d`` centralizing ``[V,f]`` and
    ``e`` not; when the class is not closed under inversion those squares
    can miss, and the rest of ``<D_W>`` is searched.
    """
    h = spread.singular_line
    if h is None:
        raise PreconditionError("need a tangent spread")
    lf = commutator_space(f)
    if h <= fixed_space(f):
        raise PreconditionError("f centralizes the singular line")
    on_w = set(spread.class_lines)
    local = [d for d, li in zip(dclass, dclass.line_of) if li in on_w]

    def centralizes(g: BitMatrix, s: Subspace) -> bool:
        return all(g.apply(v) == v for v in s.basis)

    def valid(t: BitMatrix) -> bool:
        return (
            not t.is_identity()
            and (t @ t).is_identity()
            and commutator_space(t) == h
            and not centralizes(t, lf)
            and centralizes(t, spread.span)
        )

    pairs = list(product(local, repeat=2))
    preferred = [(d, e) for d, e in pairs if centralizes(d, lf) and not centralizes(e, lf)]
    for d, e in preferred + pairs:
        de = d @ e
        if valid(de @ de):
            return de @ de
    for t in closure(local):
        if valid(t):
            return t
    raise RecoveryFailed("no involution with the singular line as commutator")


@dataclass(frozen=True)
class F4Structure:
    j_operator: BitMatrix
    solutions: int

    def check(self, generators: Sequence[BitMatrix], lines: Sequence[Subspace]) -> dict:
        j = self.j_operator
        ident = BitMatrix.identity(j.nrows)
        return {
            "j_squared_plus_j_plus_one_zero": (j @ j + j + ident) == BitMatrix.zeros(j.nrows, j.nrows),
            "commutes_with_generators": all(g @ j == j @ g for g in generators),
            "preserves_lines": all(l.is_invariant(j) for l in lines),
        }


def _commutant(generators: Sequence[BitMatrix], lines: Sequence[Subspace], n: int) -> list[BitMatrix]:
    """Basis of ``{J : Jg = gJ, l J <= l}`` as a GF(2) solution space.

    Unknown ``J[i][j]`` is variable ``i * n + j``; each constraint is a
    linear functional on the ``n * n`` unknowns.
    """
    nv = n * n
    eqs: list[int] = []
    for g in generators:
        gr = g.rows
        for i in range(n):
            for j in range(n):
                # (Jg)[i][j] = sum_k J[i][k] g[k][j];  (gJ)[i][j] = sum_k g[i][k] J[k][j]
                e = 0
                for k in range(n):
                    if (gr[k] >> j) & 1:
                        e ^= 1 << (i * n + k)
                    if (gr[i] >> k) & 1:
                        e ^= 1 << (k * n + j)
                if e:
                    eqs.append(e)
    for l in lines:
        ann = l.annihilator()
        for a in l.basis:
            for c in ann.basis:
                # (a J) . c = sum_{i,j} a_i J[i][j] c_j
                e = 0
                for i in range(n):
                    if (a >> i) & 1:
                        for j in range(n):
                            if (c >> j) & 1:
                                e ^= 1 << (i * n + j)
                eqs.append(e)
    if eqs:
        sol = kernel(BitMatrix(tuple(eqs), nv).transpose())
    else:
        sol = Subspace.full(nv)
    mask = (1 << n) - 1
    return [BitMatrix(tuple((x >> (i * n)) & mask for i in range(n)), n) for x in sol.basis]


def recover_f4(
    dclass: ClassD, lines: Sequence[Subspace], generators: Sequence[BitMatrix], sc: Optional[SpreadComplex] = None
) -> F4Structure:
    """Multiplication by a primitive cube root of unity commuting with G.

    Solves for the G-commutant preserving every line, then searches it for
    ``J`` with ``J^2 + J + 1 = 0``; of ``J`` and ``J^2`` the one with the
    smaller packed key is returned.
    """
    if sc is not None:
        check = spread_space_check(sc)
        if not (check["linear_space"] and check["veblen_young"]):
            raise PreconditionError("spreads do not form a projective space")
    n = dclass.n
    basis = _commutant(generators, lines, n)
    if len(basis) > MAX_COMMUTANT_DIM:
        raise RecoveryFailed(f"commutant of dimension {len(basis)} is too large to search")
    ident = BitMatrix.identity(n)
    zero = BitMatrix.zeros(n, n)
    found = []
    for mask in range(1, 1 << len(basis)):
        j = zero
        for i, b in enumerate(basis):
            if (mask >> i) & 1:
                j = j + b
        if j @ j + j + ident == zero:
            found.append(j)
    if not found:
        raise RecoveryFailed("no cube root of unity in the commutant")
    best = min(found, key=lambda m: m.key)
    return F4Structure(best, len(found))


def f4_basis(j: BitMatrix) -> BitMatrix:
    """Rows ``b_1, b_1 J, b_2, b_2 J, ...`` forming a GF(2)-basis."""
    n = j.nrows
    rows: list[int] = []
    span = Subspace.zero(n)
    for k in range(n):
        v = 1 << k
        if v in span:
            continue
        rows += [v, j.apply(v)]
        span = Subspace.span(rows, n)
    return BitMatrix(tuple(rows), n)


def f4_coordinates(x: int, basis_inv: BitMatrix) -> list[int]:
    """GF(4) coordinates (encoded 0..3) of ``x`` in an F4 basis."""
    return f4.decode(vec_mat(x, basis_inv.rows), basis_inv.nrows // 2)


def f4_matrix(g: BitMatrix, basis: BitMatrix, basis_inv: BitMatrix) -> list[list[int]]:
    k = basis.nrows // 2
    return [f4_coordinates(g.apply(basis.rows[2 * i]), basis_inv) for i in range(k)]


def _herm_eval(h: Sequence[Sequence[int]], x: Sequence[int], y: Sequence[int]) -> int:
    acc = 0
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj:
                acc ^= f4.mul(f4.mul(xi, h[i][j]), f4.conj(yj))
    return acc


@dataclass(frozen=True)
class HermitianModel:
    """Hermitian form in coordinates of an F4 basis.

    ``gram`` is stored as ``(H0, H1)`` with ``H = H0 + w H1``; ``basis``
    rows are ``b_1, w b_1, b_2, w b_2, ...`` and absolute points are given
    as GF(2) 2-spaces.
    """

    f4: F4Structure
    basis: BitMatrix
    gram: tuple[BitMatrix, BitMatrix]
    absolute_points: tuple[Subspace, ...]

    @property
    def k(self) -> int:
        return self.basis.nrows // 2

    def matrix(self) -> list[list[int]]:
        h0, h1 = self.gram
        return [[h0[i, j] | (h1[i, j] << 1) for j in range(self.k)] for i in range(self.k)]

    def __call__(self, x: int, y: int) -> int:
        binv = self.basis.inverse()
        return _herm_eval(self.matrix(), f4_coordinates(x, binv), f4_coordinates(y, binv))

    def check(self, generators: Sequence[BitMatrix], singular: Sequence[Subspace]) -> dict:
        h = self.matrix()
        k = self.k
        conj_sym = all(h[j][i] == f4.conj(h[i][j]) for i in range(k) for j in range(k))
        binv = self.basis.inverse()
        vecs = range(1, 1 << (2 * k))
        coords = {x: f4_coordinates(x, binv) for x in vecs}
        invariant = True
        for g in generators:
            for x, y in product(self.basis.rows, repeat=2):
                gx = f4_coordinates(g.apply(x), binv)
                gy = f4_coordinates(g.apply(y), binv)
                if _herm_eval(h, gx, gy) != _herm_eval(h, coords[x], coords[y]):
                    invariant = False
                    break
        absolute = {Subspace.span((x, self.f4.j_operator.apply(x)), 2 * k) for x in vecs if _herm_eval(h, coords[x], coords[x]) == 0}
        nondeg = all(any(_herm_eval(h, coords[x], coords[y]) for y in vecs) for x in self.basis.rows)
        return {
            "conjugate_symmetric": conj_sym,
            "invariant_under_generators": invariant,
            "nondegenerate": nondeg,
            "absolute_points_equal_singular_lines": absolute == set(singular),
        }


def _hermitian_basis(k: int) -> list[list[list[int]]]:
    """GF(2)-basis of the k x k Hermitian matrices over GF(4)."""
    out = []
    for i in range(k):
        m = [[0] * k for _ in range(k)]
        m[i][i] = 1
        out.append(m)
    for i, j in combinations(range(k), 2):
        for c in (1, f4.W):
            m = [[0] * k for _ in range(k)]
            m[i][j] = c
            m[j][i] = f4.conj(c)
            out.append(m)
    return out


def _conj_transpose(m: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[f4.conj(m[j][i]) for j in range(len(m))] for i in range(len(m[0]))]


def _flatten(m: Sequence[Sequence[int]]) -> int:
    x = 0
    for i, row in enumerate(m):
        for j, c in enumerate(row):
            x |= c << (2 * (i * len(row) + j))
    return x


def recover_hermitian(
    f4s: F4Structure, dclass: ClassD, singular: Sequence[Subspace], generators: Sequence[BitMatrix]
) -> HermitianModel:
    """The G-invariant Hermitian form on the GF(4)-space, checked against the lines.

    Invariant Hermitian forms of an absolutely irreducible group form a
    1-dimensional GF(2)-space, so the nonzero solution is unique and no
    scaling choice is involved.
    """
    if not singular:
        raise PreconditionError("no singular lines")
    n = dclass.n
    k = n // 2
    basis = f4_basis(f4s.j_operator)
    binv = basis.inverse()
    herm = _hermitian_basis(k)
    mats = [f4_matrix(g, basis, binv) for g in generators]
    cols = []
    for hm in herm:
        img = 0
        for gi, m in enumerate(mats):
            moved = f4.matmul(f4.matmul(m, hm), _conj_transpose(m))
            diff = [[moved[i][j] ^ hm[i][j] for j in range(k)] for i in range(k)]
            img |= _flatten(diff) << (2 * k * k * gi)
        cols.append(img)
    width = 2 * k * k * max(len(mats), 1)
    sol = kernel(BitMatrix(tuple(cols), width))
    if sol.dim != 1:
        raise RecoveryFailed(f"invariant Hermitian forms span dimension {sol.dim}, expected 1")
    (x,) = sol.basis
    h = [[0] * k for _ in range(k)]
    for t, hm in enumerate(herm):
        if (x >> t) & 1:
            h = [[h[i][j] ^ hm[i][j] for j in range(k)] for i in range(k)]
    h0 = BitMatrix(tuple(sum((h[i][j] & 1) << j for j in range(k)) for i in range(k)), k)
    h1 = BitMatrix(tuple(sum((h[i][j] >> 1) << j for j in range(k)) for i in range(k)), k)
    j = f4s.j_operator
    absolute = sorted(
        {Subspace.span((v, j.apply(v)), n) for v in range(1, 1 << n) if _herm_eval(h, f4_coordinates(v, binv), f4_coordinates(v, binv)) == 0},
        key=lambda s: s.basis,
    )
    model = HermitianModel(f4s, basis, (h0, h1), tuple(absolute))
    if set(absolute) != set(singular):
        raise RecoveryFailed("absolute points differ from the singular lines")
    for l, d in _line_reps(dclass):
        v = l.basis[0]
        if model(v, v) == 0:
            raise RecoveryFailed("a class line is isotropic")
        perp = Subspace.span([y for y in range(1, 1 << n) if model(y, v) == 0], n)
        if perp != fixed_space(d):
            raise RecoveryFailed("fixed space of a class element is not the perp of its line")
    return model


def _line_reps(dclass: ClassD):
    seen = {}
    for d, li in zip(dclass, dclass.line_of):
        if li not in seen:
            seen[li] = d
    return [(dclass.lines[li], d) for li, d in sorted(seen.items())]
