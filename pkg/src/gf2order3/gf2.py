"""Exact linear algebra over GF(2) on int bitsets.

Conventions used throughout the package:

* coordinate ``i`` of a vector is bit ``i`` of a Python int;
* vectors are rows and matrices act on the right, ``v -> v @ M``;
* a matrix row ``i`` is the image of the unit vector ``e_i``.

Python ints are arbitrary precision, so there is no hard dimension cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, DimensionMismatch, NotInvertible

__all__ = [
    "BitVector",
    "BitMatrix",
    "Subspace",
    "parity",
    "vec_mat",
    "rref",
    "kernel",
    "image",
    "subspace_sum",
    "subspace_meet",
    "element_order",
    "matrix_to_text",
    "matrix_from_text",
    "read_matrices",
    "write_matrices",
]


def parity(x: int) -> int:
    return x.bit_count() & 1


def vec_mat(v: int, rows: Sequence[int]) -> int:
    """Row vector ``v`` times the matrix with the given rows."""
    acc = 0
    while v:
        low = v & -v
        acc ^= rows[low.bit_length() - 1]
        v ^= low
    return acc


def bits_to_str(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def str_to_bits(s: str) -> int:
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"bad bit character {ch!r}")
    return x


def _as_int(v) -> int:
    return v.bits if isinstance(v, BitVector) else int(v)


@dataclass(frozen=True)
class BitVector:
    n: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits set beyond the dimension")

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        s = s.strip()
        return cls(len(s), str_to_bits(s))

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        return cls(n, 1 << i)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: "BitVector") -> "BitVector":
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} != {other.n}")
        return BitVector(self.n, self.bits ^ other.bits)

    def dot(self, other: "BitVector") -> int:
        return parity(self.bits & other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return bits_to_str(self.bits, self.n)


def _rref_rows(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    work = [r for r in rows if r]
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == len(work):
            break
        bit = 1 << c
        for i in range(r, len(work)):
            if work[i] & bit:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        pr = work[r]
        for k in range(len(work)):
            if k != r and work[k] & bit:
                work[k] ^= pr
        pivots.append(c)
        r += 1
    return work[:r], pivots


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond ncols")

    # constructors
    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        rows = [r.strip() for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(tuple(str_to_bits(r) for r in rows), ncols)

    @classmethod
    def from_key(cls, key: int, n: int) -> "BitMatrix":
        mask = (1 << n) - 1
        return cls(tuple((key >> (n * i)) & mask for i in range(n)), n)

    # shape
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def key(self) -> int:
        """Rows packed into one int; sorting by key is lexicographic on bits."""
        k = 0
        for i, r in enumerate(self.rows):
            k |= r << (self.ncols * i)
        return k

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    # arithmetic
    def apply(self, v) -> int:
        """``v @ self`` for a vector given as int or BitVector."""
        return vec_mat(_as_int(v), self.rows)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        orows = other.rows
        return BitMatrix(tuple(vec_mat(r, orows) for r in self.rows), other.ncols)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("shapes differ")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def transpose(self) -> "BitMatrix":
        out = []
        for j in range(self.ncols):
            col = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    col |= 1 << i
            out.append(col)
        return BitMatrix(tuple(out), self.nrows)

    @property
    def rank(self) -> int:
        return len(_rref_rows(self.rows, self.ncols)[0])

    def is_invertible(self) -> bool:
        return self.is_square and self.rank == self.nrows

    def inverse(self) -> "BitMatrix":
        n = self.nrows
        if not self.is_square:
            raise NotInvertible("matrix is not square")
        work = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        for c in range(n):
            bit = 1 << c
            for i in range(c, n):
                if work[i] & bit:
                    break
            else:
                raise NotInvertible("matrix is singular")
            work[c], work[i] = work[i], work[c]
            pr = work[c]
            for k in range(n):
                if k != c and work[k] & bit:
                    work[k] ^= pr
        mask = (1 << n) - 1
        return BitMatrix(tuple((w >> n) & mask for w in work), n)

    def __pow__(self, k: int) -> "BitMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = BitMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def conjugate(self, g: "BitMatrix") -> "BitMatrix":
        """``g^-1 self g``."""
        return g.inverse() @ self @ g

    def is_identity(self) -> bool:
        return self.is_square and all(r == 1 << i for i, r in enumerate(self.rows))

    def to_strings(self) -> list[str]:
        return [bits_to_str(r, self.ncols) for r in self.rows]

    def __str__(self) -> str:
        return matrix_to_text(self)


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(2)^n kept as its reduced row-echelon basis.

    Pivots are the lowest set bit of each row (the leftmost character in
    the text format) and increase strictly, so equality is structural.
    """

    ambient_dim: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int) -> "Subspace":
        rows, _ = _rref_rows((_as_int(v) for v in vectors), ambient_dim)
        return cls(ambient_dim, tuple(rows))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [(b & -b).bit_length() - 1 for b in self.basis]

    def __contains__(self, v) -> bool:
        v = _as_int(v)
        for b in self.basis:
            low = b & -b
            if v & low:
                v ^= b
        return v == 0

    def reduce(self, v: int) -> int:
        for b in self.basis:
            if v & (b & -b):
                v ^= b
        return v

    def vectors(self) -> Iterator[int]:
        """All 2**dim elements, zero first."""
        basis = self.basis
        for mask in range(1 << len(basis)):
            v = 0
            i = 0
            m = mask
            while m:
                if m & 1:
                    v ^= basis[i]
                m >>= 1
                i += 1
            yield v

    def nonzero_vectors(self) -> list[int]:
        return sorted(v for v in self.vectors() if v)

    def _check(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"{self.ambient_dim} != {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def annihilator(self) -> "Subspace":
        """``{y : y.x = 0 for all x in self}`` for the standard dot product."""
        pivots = self.pivots
        pivset = set(pivots)
        out = []
        for c in range(self.ambient_dim):
            if c in pivset:
                continue
            y = 1 << c
            for p, b in zip(pivots, self.basis):
                if (b >> c) & 1:
                    y |= 1 << p
            out.append(y)
        return Subspace.span(out, self.ambient_dim)

    def image(self, m: BitMatrix) -> "Subspace":
        return Subspace.span((m.apply(b) for b in self.basis), m.ncols)

    def is_invariant(self, m: BitMatrix) -> bool:
        return all(m.apply(b) in self for b in self.basis)

    def to_text(self) -> str:
        return "\n".join(bits_to_str(b, self.ambient_dim) for b in self.basis)

    @classmethod
    def from_text(cls, text: str, ambient_dim: int | None = None) -> "Subspace":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if ambient_dim is None:
            if not rows:
                raise ValueError("cannot infer dimension of an empty subspace")
            ambient_dim = len(rows[0])
        return cls.span((str_to_bits(r) for r in rows), ambient_dim)

    def __str__(self) -> str:
        return "<" + ",".join(bits_to_str(b, self.ambient_dim) for b in self.basis) + ">"


def rref(m: BitMatrix) -> tuple[BitMatrix, int]:
    rows, _ = _rref_rows(m.rows, m.ncols)
    rank = len(rows)
    return BitMatrix(tuple(rows) + (0,) * (m.nrows - rank), m.ncols), rank


def kernel(m: BitMatrix) -> Subspace:
    """Left kernel ``{v : v @ m = 0}``, a subspace of GF(2)^nrows."""
    n, c = m.nrows, m.ncols
    mask = (1 << c) - 1
    work = [r | (1 << (c + i)) for i, r in enumerate(m.rows)]
    # rows whose low part cancelled carry the kernel in their high part
    full, _ = _rref_rows(work, c + n)
    return Subspace.span((w >> c for w in full if not (w & mask)), n)


def image(m: BitMatrix) -> Subspace:
    return Subspace.span(m.rows, m.ncols)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def subspace_meet(a: Subspace, b: Subspace) -> Subspace:
    return a & b


def element_order(m: BitMatrix, cap: int = 10**6) -> int:
    if not m.is_invertible():
        raise NotInvertible("element_order needs an invertible matrix")
    ident = BitMatrix.identity(m.nrows)
    p = m
    k = 1
    while p != ident:
        k += 1
        if k > cap:
            raise CapExceeded(f"order exceeds cap {cap}", partial=cap)
        p = p @ m
    return k


def matrix_to_text(m: BitMatrix) -> str:
    lines = [f"{m.nrows} {m.ncols}"]
    lines.extend(m.to_strings())
    return "\n".join(lines)


def matrix_from_text(text: str) -> BitMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    r, c = (int(t) for t in lines[0].split())
    body = lines[1:]
    if len(body) != r or any(len(row) != c for row in body):
        raise ValueError(f"matrix body does not match header {r} {c}")
    return BitMatrix(tuple(str_to_bits(row) for row in body), c)


def read_matrices(text: str) -> list[BitMatrix]:
    """Parse matrices in text format separated by blank lines."""
    blocks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip():
            blocks[-1].append(line)
        elif blocks[-1]:
            blocks.append([])
    return [matrix_from_text("\n".join(b)) for b in blocks if b]


def write_matrices(ms: Iterable[BitMatrix]) -> str:
    return "\n\n".join(matrix_to_text(m) for m in ms) + "\n"
