"""The point-line geometry of a class of order-3 elements.

Lines are the commutator spaces of class elements; points are the
1-spaces in which two distinct lines meet.  A 1-space is stored as its
unique nonzero vector.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import networkx as nx

from .errors import InvariantViolation, PreconditionError
from .gf2 import BitMatrix, Subspace
from .group import ClassD

__all__ = [
    "Geometry",
    "PlaneKind",
    "PlaneType",
    "build_geometry",
    "plane_type",
    "plane_census",
    "connectivity",
    "perp_radical",
    "equiv_classes",
    "line_key",
    "two_spaces",
    "transport_path",
]


def line_key(vectors) -> tuple[int, int, int]:
    a, b = sorted(vectors)[:2]
    return tuple(sorted((a, b, a ^ b)))


def two_spaces(w: Subspace) -> list[tuple[int, int, int]]:
    """All 2-dimensional subspaces of ``w`` as sorted vector triples."""
    vecs = w.nonzero_vectors()
    seen = set()
    for a, b in combinations(vecs, 2):
        seen.add(line_key((a, b)))
    return sorted(seen)


@dataclass(frozen=True)
class Geometry:
    n: int
    lines: tuple[Subspace, ...]
    line_vectors: tuple[tuple[int, int, int], ...] = field(repr=False)
    points: tuple[int, ...]
    point_lines: tuple[tuple[int, ...], ...] = field(repr=False)
    line_points: tuple[tuple[int, ...], ...] = field(repr=False)
    graph: nx.Graph = field(repr=False, compare=False)

    @property
    def point_index(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def line_index(self) -> dict[tuple[int, int, int], int]:
        return {v: i for i, v in enumerate(self.line_vectors)}

    def point_spaces(self) -> list[Subspace]:
        return [Subspace.span((p,), self.n) for p in self.points]

    def collinear(self, p: int, q: int) -> bool:
        return p != q and self.graph.has_edge(p, q)

    def perp(self, p: int) -> list[int]:
        """``p`` together with every point not collinear with it."""
        nbrs = set(self.graph.adj[p])
        return [q for q in self.points if q not in nbrs]

    def perp_span(self, p: int) -> Subspace:
        return Subspace.span(self.perp(p), self.n)

    def lines_in(self, w: Subspace) -> list[int]:
        index = self.line_index
        return [index[k] for k in two_spaces(w) if k in index]

    def points_in(self, w: Subspace) -> list[int]:
        pts = set(self.points)
        return [v for v in w.nonzero_vectors() if v in pts]

    def census(self) -> dict:
        return {"points": len(self.points), "lines": len(self.lines)}


def build_geometry(dclass: ClassD | Sequence[Subspace]) -> Geometry:
    lines = tuple(dclass.lines if isinstance(dclass, ClassD) else dclass)
    if not lines:
        raise PreconditionError("no lines")
    n = lines[0].ambient_dim
    if any(l.ambient_dim != n or l.dim != 2 for l in lines):
        raise PreconditionError("lines must be 2-spaces of one ambient space")
    vecs = tuple(line_key(l.nonzero_vectors()) for l in lines)
    through: dict[int, list[int]] = defaultdict(list)
    for i, trip in enumerate(vecs):
        for v in trip:
            through[v].append(i)
    points = tuple(sorted(v for v, ls in through.items() if len(ls) >= 2))
    pset = set(points)
    line_points = tuple(tuple(v for v in trip if v in pset) for trip in vecs)
    for i, lp in enumerate(line_points):
        if len(lp) not in (0, 3):
            raise InvariantViolation(f"line {i} carries {len(lp)} points")
    point_lines = tuple(tuple(through[p]) for p in points)
    graph = nx.Graph()
    graph.add_nodes_from(points)
    for lp in line_points:
        if lp:
            graph.add_edges_from(combinations(lp, 2))
    return Geometry(n, lines, vecs, points, point_lines, line_points, graph)


class PlaneKind(enum.Enum):
    PROJECTIVE = "Projective"
    DUAL_AFFINE = "DualAffine"


@dataclass(frozen=True)
class PlaneType:
    span: Subspace
    kind: PlaneKind
    missing_point: Optional[int] = None


def _type_plane(geom: Geometry, w: Subspace) -> PlaneType:
    lns = geom.lines_in(w)
    pts = sorted({v for i in lns for v in geom.line_points[i]})
    if len(pts) == 7 and len(lns) == 7:
        return PlaneType(w, PlaneKind.PROJECTIVE)
    if len(pts) == 6 and len(lns) == 4:
        (missing,) = set(w.nonzero_vectors()) - set(pts)
        if all(missing not in geom.line_vectors[i] for i in lns):
            return PlaneType(w, PlaneKind.DUAL_AFFINE, missing)
    raise InvariantViolation(f"plane with {len(pts)} points and {len(lns)} lines is neither type")


def plane_type(geom: Geometry, l: Subspace, m: Subspace) -> PlaneType:
    if l == m:
        raise PreconditionError("lines must be distinct")
    meet = l & m
    if meet.dim != 1 or meet.basis[0] not in set(geom.points):
        raise PreconditionError("lines do not meet in a point")
    return _type_plane(geom, l + m)


def plane_census(geom: Geometry) -> dict[Subspace, PlaneType]:
    """Type of every plane spanned by two lines through a common point."""
    out: dict[Subspace, PlaneType] = {}
    for ls in geom.point_lines:
        for i, j in combinations(ls, 2):
            w = geom.lines[i] + geom.lines[j]
            if w not in out:
                out[w] = _type_plane(geom, w)
    return out


def connectivity(geom: Geometry) -> tuple[int, int]:
    """(component count, diameter of the largest component)."""
    if not geom.points:
        raise PreconditionError("empty point set")
    comps = list(nx.connected_components(geom.graph))
    biggest = max(comps, key=len)
    sub = geom.graph.subgraph(biggest)
    return len(comps), nx.diameter(sub) if len(biggest) > 1 else 0


def perp_radical(geom: Geometry) -> Subspace:
    if not geom.points:
        raise PreconditionError("empty point set")
    rad = Subspace.full(geom.n)
    for p in geom.points:
        rad = rad & geom.perp_span(p)
        if rad.dim == 0:
            break
    return rad


def equiv_classes(geom: Geometry) -> list[list[int]]:
    """Points grouped by equal perps, sorted."""
    groups: dict[frozenset, list[int]] = defaultdict(list)
    for p in geom.points:
        groups[frozenset(geom.perp(p))].append(p)
    return sorted(sorted(g) for g in groups.values())


def transport_path(geom: Geometry, dclass: ClassD, src: int, dst: int) -> BitMatrix:
    """A product of class elements mapping line ``src`` to line ``dst``.

    Walks a shortest chain of lines meeting pairwise in points; at each step
    the elements whose lines lie in the plane of the two consecutive lines
    move one to the other.
    """
    lg = nx.Graph()
    lg.add_nodes_from(range(len(geom.lines)))
    for ls in geom.point_lines:
        lg.add_edges_from(combinations(ls, 2))
    path = nx.shortest_path(lg, src, dst)
    by_line = dclass.by_line()
    g = BitMatrix.identity(geom.n)
    for a, b in zip(path, path[1:]):
        w = geom.lines[a] + geom.lines[b]
        local = [d for i in geom.lines_in(w) for d in by_line.get(i, ())]
        step = _plane_step(geom.lines[a], geom.lines[b], local)
        if step is None:
            raise InvariantViolation("no element of the plane moves one line to the next")
        g = g @ step
    if geom.lines[src].image(g) != geom.lines[dst]:
        raise InvariantViolation("transport does not reach the target line")
    return g


def _plane_step(l: Subspace, m: Subspace, local: list[BitMatrix]) -> Optional[BitMatrix]:
    """BFS over products of ``local`` until ``l`` is sent to ``m``."""
    ident = BitMatrix.identity(l.ambient_dim)
    seen = {l: ident}
    frontier = [l]
    while frontier:
        nxt = []
        for s in frontier:
            for d in local:
                t = s.image(d)
                if t not in seen:
                    seen[t] = seen[s] @ d
                    if t == m:
                        return seen[t]
                    nxt.append(t)
        frontier = nxt
    return seen.get(m)
