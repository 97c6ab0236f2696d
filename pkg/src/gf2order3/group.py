"""Matrix groups over GF(2): closure, conjugacy orbits, element invariants.

Elements are stored by their packed key (see ``BitMatrix.key``). For
dimension <= 8 a key fits a uint64 and the enumeration runs on numpy
arrays of rows; larger dimensions fall back to Python sets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, InvariantViolation, NotInvertible, PreconditionError
from .gf2 import BitMatrix, Subspace, element_order, image, kernel, vec_mat

__all__ = [
    "DEFAULT_CLOSURE_CAP",
    "GroupClosure",
    "ClassD",
    "CommutatorDecomposition",
    "HypothesisReport",
    "InvariantKind",
    "closure",
    "conjugation_orbit",
    "commutator_space",
    "fixed_space",
    "decompose",
    "is_d_element",
    "is_transvection",
    "build_class",
    "check_hypotheses",
    "line_orbits",
    "count_transvections",
    "invariant_subspace_check",
]

DEFAULT_CLOSURE_CAP = 1 << 24
FAST_DIM = 8


# ---------------------------------------------------------------------------
# vectorised helpers (dimension <= FAST_DIM)


def _table(g: BitMatrix) -> np.ndarray:
    """Lookup table ``v -> v @ g`` for every vector of the ambient space."""
    n = g.nrows
    return np.array([vec_mat(v, g.rows) for v in range(1 << n)], dtype=np.uint16)


def _pack(rows: np.ndarray, n: int) -> np.ndarray:
    keys = np.zeros(rows.shape[0], dtype=np.uint64)
    for i in range(n):
        keys |= rows[:, i].astype(np.uint64) << np.uint64(n * i)
    return keys


def _unpack(keys: np.ndarray, n: int) -> np.ndarray:
    mask = np.uint64((1 << n) - 1)
    out = np.empty((keys.shape[0], n), dtype=np.uint16)
    for i in range(n):
        out[:, i] = (keys >> np.uint64(n * i)) & mask
    return out


def _left_mul(m: BitMatrix, rows: np.ndarray) -> np.ndarray:
    """Batch product ``m @ X`` for a stack of matrices ``X`` given by rows."""
    out = np.zeros_like(rows)
    for i, r in enumerate(m.rows):
        j = 0
        while r:
            if r & 1:
                out[:, i] ^= rows[:, j]
            r >>= 1
            j += 1
    return out


def batch_matmul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Elementwise product of two stacks of n x n matrices."""
    out = np.zeros_like(a)
    for i in range(n):
        ai = a[:, i]
        for j in range(n):
            sel = (ai >> j) & 1
            out[:, i] ^= b[:, j] * sel.astype(b.dtype)
    return out


def _batch_line_vectors(rows: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For each matrix M return (a, b, ok): a basis of the row space of M + I
    and whether that space is exactly 2-dimensional."""
    ident = np.array([1 << i for i in range(n)], dtype=rows.dtype)
    c = rows ^ ident
    idx = np.arange(c.shape[0])
    nz = c != 0
    a = c[idx, np.argmax(nz, axis=1)]
    second = nz & (c != a[:, None])
    has_b = second.any(axis=1)
    b = c[idx, np.argmax(second, axis=1)]
    ab = a ^ b
    inside = (c == 0) | (c == a[:, None]) | (c == b[:, None]) | (c == ab[:, None])
    ok = nz.any(axis=1) & has_b & inside.all(axis=1)
    return a, b, ok


def _line_keys(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    trip = np.sort(np.stack([a, b, a ^ b], axis=1).astype(np.uint64), axis=1)
    return trip[:, 0] | (trip[:, 1] << np.uint64(n)) | (trip[:, 2] << np.uint64(2 * n))


# ---------------------------------------------------------------------------
# closure


def _check_generators(generators: Sequence[BitMatrix]) -> int:
    if not generators:
        raise PreconditionError("need at least one generator")
    n = generators[0].nrows
    for g in generators:
        if g.nrows != n or g.ncols != n:
            raise DimensionMismatch("generators differ in dimension")
        if not g.is_invertible():
            raise NotInvertible("generator is singular")
    return n


@dataclass(frozen=True)
class GroupClosure:
    """All elements of the group generated by ``generators``, sorted by key."""

    generators: tuple[BitMatrix, ...]
    n: int
    keys: np.ndarray | tuple = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.keys)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, m: BitMatrix) -> bool:
        k = m.key
        if isinstance(self.keys, np.ndarray):
            i = int(np.searchsorted(self.keys, np.uint64(k)))
            return i < len(self.keys) and int(self.keys[i]) == k
        return k in set(self.keys)

    def __iter__(self) -> Iterator[BitMatrix]:
        for k in self.keys:
            yield BitMatrix.from_key(int(k), self.n)

    @property
    def elements(self) -> list[BitMatrix]:
        return list(self)

    def rows(self) -> np.ndarray:
        if not isinstance(self.keys, np.ndarray):
            raise ValueError("row arrays only exist for the vectorised path")
        return _unpack(self.keys, self.n)


def closure(generators: Sequence[BitMatrix], cap: int = DEFAULT_CLOSURE_CAP) -> GroupClosure:
    """Breadth-first product closure of a list of invertible matrices."""
    n = _check_generators(generators)
    gens = tuple(generators)
    if n <= FAST_DIM:
        return GroupClosure(gens, n, _closure_fast(gens, n, cap))
    return GroupClosure(gens, n, _closure_slow(gens, n, cap))


def _closure_fast(gens: tuple[BitMatrix, ...], n: int, cap: int) -> np.ndarray:
    tables = [_table(g) for g in dict.fromkeys(gens)]
    ident = BitMatrix.identity(n)
    visited = np.array([ident.key], dtype=np.uint64)
    frontier = _unpack(visited, n)
    while frontier.shape[0]:
        cand = np.unique(np.concatenate([_pack(t[frontier], n) for t in tables]))
        new = cand[~np.isin(cand, visited, assume_unique=True)]
        if not new.size:
            break
        visited = np.sort(np.concatenate([visited, new]))
        if visited.size > cap:
            raise CapExceeded(f"group closure exceeds cap {cap}", partial=int(visited.size))
        frontier = _unpack(new, n)
    return visited


def _closure_slow(gens: tuple[BitMatrix, ...], n: int, cap: int) -> tuple[int, ...]:
    ident = BitMatrix.identity(n)
    seen = {ident.key: ident.rows}
    frontier = [ident.rows]
    grows = [g.rows for g in dict.fromkeys(gens)]
    while frontier:
        nxt = []
        for rows in frontier:
            for gr in grows:
                prod = tuple(vec_mat(r, gr) for r in rows)
                k = 0
                for i, r in enumerate(prod):
                    k |= r << (n * i)
                if k not in seen:
                    seen[k] = prod
                    nxt.append(prod)
        if len(seen) > cap:
            raise CapExceeded(f"group closure exceeds cap {cap}", partial=len(seen))
        frontier = nxt
    return tuple(sorted(seen))


def conjugation_orbit(
    seed: BitMatrix, generators: Sequence[BitMatrix], cap: int = DEFAULT_CLOSURE_CAP
) -> np.ndarray | tuple:
    """Sorted keys of ``{g^-1 seed g : g in <generators>}``."""
    n = _check_generators(generators)
    if seed.nrows != n:
        raise DimensionMismatch("seed and generators differ in dimension")
    gens = list(dict.fromkeys(generators))
    if n <= FAST_DIM:
        pairs = [(g.inverse(), _table(g)) for g in gens]
        visited = np.array([seed.key], dtype=np.uint64)
        frontier = _unpack(visited, n)
        while frontier.shape[0]:
            cand = np.unique(np.concatenate([_pack(t[_left_mul(gi, frontier)], n) for gi, t in pairs]))
            new = cand[~np.isin(cand, visited, assume_unique=True)]
            if not new.size:
                break
            visited = np.sort(np.concatenate([visited, new]))
            if visited.size > cap:
                raise CapExceeded(f"conjugacy orbit exceeds cap {cap}", partial=int(visited.size))
            frontier = _unpack(new, n)
        return visited
    pairs = [(g.inverse(), g) for g in gens]
    seen = {seed.key: seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in pairs:
                y = gi @ x @ g
                if y.key not in seen:
                    seen[y.key] = y
                    nxt.append(y)
        if len(seen) > cap:
            raise CapExceeded(f"conjugacy orbit exceeds cap {cap}", partial=len(seen))
        frontier = nxt
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# element invariants


def commutator_space(d: BitMatrix) -> Subspace:
    """``[V,d]``, the image of ``v -> vd + v``."""
    return image(d + BitMatrix.identity(d.nrows))


def fixed_space(d: BitMatrix) -> Subspace:
    """``C_V(d)``, the vectors fixed by ``d``."""
    return kernel(d + BitMatrix.identity(d.nrows))


@dataclass(frozen=True)
class CommutatorDecomposition:
    commutator: Subspace
    fixed: Subspace

    @property
    def is_direct(self) -> bool:
        c, f = self.commutator, self.fixed
        return (c & f).dim == 0 and (c + f).dim == c.ambient_dim


def decompose(d: BitMatrix) -> CommutatorDecomposition:
    return CommutatorDecomposition(commutator_space(d), fixed_space(d))


def is_d_element(m: BitMatrix) -> bool:
    """Order 3 with a 2-dimensional commutator space."""
    if not m.is_invertible() or m.is_identity():
        return False
    return (m @ m @ m).is_identity() and commutator_space(m).dim == 2


def is_transvection(m: BitMatrix) -> bool:
    """Order 2 with a 1-dimensional commutator space."""
    if m.is_identity() or not (m @ m).is_identity():
        return False
    return commutator_space(m).dim == 1


# ---------------------------------------------------------------------------
# the class D


@dataclass(frozen=True)
class ClassD:
    """Conjugation orbit of a seed element together with its lines.

    ``line_of[i]`` is the index in ``lines`` of the commutator space of the
    element with key ``keys[i]``.  ``is_single_class`` is None when the
    group was not enumerated.
    """

    n: int
    seed: BitMatrix
    keys: np.ndarray | tuple = field(repr=False, compare=False)
    lines: tuple[Subspace, ...] = field(repr=False)
    line_of: tuple[int, ...] = field(repr=False, compare=False)
    is_single_class: Optional[bool] = None
    inverse_closed: bool = True

    @property
    def size(self) -> int:
        return len(self.keys)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[BitMatrix]:
        for k in self.keys:
            yield BitMatrix.from_key(int(k), self.n)

    @property
    def elements(self) -> list[BitMatrix]:
        return list(self)

    def __contains__(self, m: BitMatrix) -> bool:
        k = m.key
        if isinstance(self.keys, np.ndarray):
            i = int(np.searchsorted(self.keys, np.uint64(k)))
            return i < len(self.keys) and int(self.keys[i]) == k
        return k in set(self.keys)

    def by_line(self) -> dict[int, list[BitMatrix]]:
        """Line index -> class elements with that commutator space."""
        out: dict[int, list[BitMatrix]] = {}
        for m, li in zip(self, self.line_of):
            out.setdefault(li, []).append(m)
        return out


CHUNK = 1 << 20


def _row_chunks(group: GroupClosure) -> Iterator[np.ndarray]:
    for start in range(0, group.order, CHUNK):
        yield _unpack(group.keys[start : start + CHUNK], group.n)


def _count_d_type(group: GroupClosure) -> int:
    """Number of elements of order 3 with 2-dimensional commutator."""
    n = group.n
    if not isinstance(group.keys, np.ndarray):
        return sum(1 for m in group if is_d_element(m))
    total = 0
    for rows in _row_chunks(group):
        ident = np.array([1 << i for i in range(n)], dtype=rows.dtype)
        cube = batch_matmul(batch_matmul(rows, rows, n), rows, n)
        is3 = (cube == ident).all(axis=1) & ~(rows == ident).all(axis=1)
        _, _, ok = _batch_line_vectors(rows[is3], n)
        total += int(ok.sum())
    return total


def count_transvections(group: GroupClosure) -> int:
    """Number of elements ``1 + c`` with ``c`` of rank 1 and ``c^2 = 0``."""
    n = group.n
    if not isinstance(group.keys, np.ndarray):
        return sum(1 for m in group if is_transvection(m))
    total = 0
    for rows in _row_chunks(group):
        ident = np.array([1 << i for i in range(n)], dtype=rows.dtype)
        c = rows ^ ident
        nz = c != 0
        a = c[np.arange(c.shape[0]), np.argmax(nz, axis=1)]
        rank1 = nz.any(axis=1) & ((c == 0) | (c == a[:, None])).all(axis=1)
        sq = batch_matmul(rows[rank1], rows[rank1], n)
        total += int((sq == ident).all(axis=1).sum())
    return total


def build_class(
    generators: Sequence[BitMatrix],
    seed: BitMatrix,
    group: Optional[GroupClosure] = None,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> ClassD:
    """Conjugation orbit of ``seed`` under ``<generators>``.

    When ``group`` is given, also decides whether the orbit exhausts the
    elements of order 3 with 2-dimensional commutator in the group.
    """
    if not is_d_element(seed):
        raise PreconditionError("seed must have order 3 and a 2-dimensional commutator")
    n = seed.nrows
    keys = conjugation_orbit(seed, generators, cap)
    if isinstance(keys, np.ndarray):
        rows = _unpack(keys, n)
        a, b, ok = _batch_line_vectors(rows, n)
        if not ok.all():
            raise InvariantViolation("conjugate with commutator dimension != 2")
        lk = _line_keys(a, b, n)
        uniq, first, inv = np.unique(lk, return_index=True, return_inverse=True)
        lines = tuple(Subspace.span((int(a[i]), int(b[i])), n) for i in first)
        line_of = tuple(int(x) for x in inv.ravel())
        inv_keys = _pack(batch_matmul(rows, rows, n), n)
        inverse_closed = bool(np.isin(inv_keys, keys).all())
    else:
        elems = [BitMatrix.from_key(k, n) for k in keys]
        spaces = [commutator_space(m) for m in elems]
        lines = tuple(sorted(set(spaces), key=lambda s: s.basis))
        index = {s: i for i, s in enumerate(lines)}
        line_of = tuple(index[s] for s in spaces)
        keyset = set(keys)
        inverse_closed = all((m @ m).key in keyset for m in elems)
    single = None
    if group is not None:
        single = _count_d_type(group) == len(keys)
    return ClassD(n, seed, keys, lines, line_of, single, inverse_closed)


# ---------------------------------------------------------------------------
# hypotheses


def line_orbits(lines: Sequence[Subspace], generators: Sequence[BitMatrix]) -> list[list[int]]:
    """Orbits of ``<generators>`` on a set of subspaces, as index lists."""
    index = {s: i for i, s in enumerate(lines)}
    seen = [False] * len(lines)
    orbits = []
    for start in range(len(lines)):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        stack = [start]
        while stack:
            s = lines[stack.pop()]
            for g in generators:
                j = index.get(s.image(g))
                if j is None:
                    raise InvariantViolation("line set is not invariant under the group")
                if not seen[j]:
                    seen[j] = True
                    orbit.append(j)
                    stack.append(j)
        orbits.append(sorted(orbit))
    return orbits


@dataclass(frozen=True)
class HypothesisReport:
    dimension: int
    dim_commutator: int
    dim_centralizer: int
    line_orbit_count: int
    generated_by_class: Optional[bool]

    @property
    def commutator_full(self) -> bool:
        return self.dim_commutator == self.dimension

    @property
    def centralizer_trivial(self) -> bool:
        return self.dim_centralizer == 0

    @property
    def transitive_on_lines(self) -> bool:
        return self.line_orbit_count == 1

    @property
    def ok(self) -> bool:
        return (
            self.commutator_full
            and self.centralizer_trivial
            and self.transitive_on_lines
            and self.generated_by_class is not False
        )

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "dim_commutator_VG": self.dim_commutator,
            "dim_centralizer_CVG": self.dim_centralizer,
            "line_orbit_count": self.line_orbit_count,
            "generated_by_class": self.generated_by_class,
            "commutator_full": self.commutator_full,
            "centralizer_trivial": self.centralizer_trivial,
            "transitive_on_lines": self.transitive_on_lines,
        }


def _generated_by(dclass: ClassD, group: GroupClosure) -> bool:
    """Whether class elements alone generate ``group`` (greedy closure)."""
    gens: list[BitMatrix] = []
    sub = None
    for d in dclass:
        if sub is not None and d in sub:
            continue
        gens.append(d)
        sub = closure(gens, cap=max(group.order, 1))
        if sub.order == group.order:
            return True
    return False


def check_hypotheses(group: GroupClosure | Sequence[BitMatrix], dclass: ClassD) -> HypothesisReport:
    """Hypotheses for ``<D>``: ``[V,<D>] = V``, ``C_V(<D>) = 0``, one line orbit.

    ``[V,<D>]`` is the span of the lines and ``C_V(<D>)`` the meet of the
    fixed spaces of class elements.  When every generator lies in D the
    generators stand in for D; otherwise the class is used directly and
    ``generated_by_class`` is decided by closure if ``group`` was enumerated
    (None if it was not).
    """
    enumerated = isinstance(group, GroupClosure)
    gens = list(group.generators) if enumerated else list(group)
    n = dclass.n
    comm = Subspace.zero(n)
    for line in dclass.lines:
        comm = comm + line
    in_class = all(g in dclass for g in gens)
    actors = gens if in_class else dclass.elements
    cent = Subspace.full(n)
    for g in actors:
        cent = cent & fixed_space(g)
        if cent.dim == 0:
            break
    orbits = line_orbits(dclass.lines, actors)
    if in_class:
        generated = True
    elif enumerated:
        generated = _generated_by(dclass, group)
    else:
        generated = None
    return HypothesisReport(n, comm.dim, cent.dim, len(orbits), generated)


class InvariantKind(enum.Enum):
    CENTRALIZED = "centralized"
    CONTAINS_LINE = "contains_line"
    NOT_INVARIANT = "not_invariant"


def invariant_subspace_check(d: BitMatrix, w: Subspace) -> InvariantKind:
    """Which side of the invariant-subspace dichotomy ``w`` falls on."""
    if not is_d_element(d):
        raise PreconditionError("d must have order 3 and a 2-dimensional commutator")
    if not w.is_invariant(d):
        return InvariantKind.NOT_INVARIANT
    if w <= fixed_space(d):
        return InvariantKind.CENTRALIZED
    if commutator_space(d) <= w:
        return InvariantKind.CONTAINS_LINE
    raise InvariantViolation("invariant subspace neither centralized nor containing [V,d]")


def order_of(m: BitMatrix, cap: int = 10**6) -> int:
    return element_order(m, cap)
