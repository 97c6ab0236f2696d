"""The field with four elements and its embedding into GF(2) matrices.

An element ``a + b*w`` (``w^2 = w + 1``) is the int ``a | b << 1``, so
0, 1, 2 = w, 3 = w^2 = w + 1.  Addition is XOR.  A vector of F4^k becomes
the GF(2) vector whose bits ``2i, 2i+1`` hold coordinate ``i``.
"""

from __future__ import annotations

from typing import Sequence

from .gf2 import BitMatrix

W = 2
W2 = 3

_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)
_INV = {1: 1, 2: 3, 3: 2}


def mul(x: int, y: int) -> int:
    return _MUL[x][y]


def inv(x: int) -> int:
    return _INV[x]


def conj(x: int) -> int:
    """Frobenius ``x -> x^2``."""
    return _MUL[x][x]


def norm(x: int) -> int:
    """``x^3``: 1 for nonzero x."""
    return 1 if x else 0


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc ^= _MUL[a][b]
    return acc


def scale(c: int, v: Sequence[int]) -> list[int]:
    return [_MUL[c][x] for x in v]


def encode(v: Sequence[int]) -> int:
    x = 0
    for i, c in enumerate(v):
        x |= c << (2 * i)
    return x


def decode(x: int, k: int) -> list[int]:
    return [(x >> (2 * i)) & 3 for i in range(k)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[dot(row, col) for col in cols] for row in a]


def to_bitmatrix(m: Sequence[Sequence[int]]) -> BitMatrix:
    """GF(2) form of the F4-linear map ``x -> x m`` (rows images of e_i, w e_i)."""
    rows = []
    for row in m:
        rows.append(encode(row))
        rows.append(encode(scale(W, row)))
    return BitMatrix(tuple(rows), 2 * len(m))


def scalar_operator(k: int, c: int = W) -> BitMatrix:
    """Multiplication by the scalar ``c`` on F4^k, as a GF(2) matrix."""
    return to_bitmatrix([[c if i == j else 0 for j in range(k)] for i in range(k)])


def all_vectors(k: int):
    for x in range(1 << (2 * k)):
        yield decode(x, k)
