"""Symplectic and quadratic forms over GF(2), and group order formulas."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod

from .gf2 import BitMatrix, BitVector, Subspace, kernel, parity, vec_mat

__all__ = [
    "SymplecticForm",
    "QuadraticForm",
    "order_gl",
    "order_sp",
    "order_omega",
    "order_alt",
    "order_gl4",
    "order_gu",
]


@dataclass(frozen=True)
class SymplecticForm:
    gram: BitMatrix

    def __post_init__(self):
        g = self.gram
        if not g.is_square:
            raise ValueError("Gram matrix must be square")
        if g.transpose() != g:
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i, i] for i in range(g.nrows)):
            raise ValueError("Gram matrix must have zero diagonal")

    @classmethod
    def standard(cls, n: int) -> "SymplecticForm":
        """Hyperbolic pairs (0,1), (2,3), ...; an odd last coordinate is radical."""
        rows = [0] * n
        for i in range(0, n - 1, 2):
            rows[i] = 1 << (i + 1)
            rows[i + 1] = 1 << i
        return cls(BitMatrix(tuple(rows), n))

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def __call__(self, u: int, v: int) -> int:
        return parity(vec_mat(u, self.gram.rows) & v)

    def functional(self, v: int) -> int:
        """Bits of the linear map ``x -> f(x, v)``."""
        return vec_mat(v, self.gram.rows)

    def radical(self) -> Subspace:
        return kernel(self.gram)

    def is_nondegenerate(self) -> bool:
        return self.gram.is_invertible()

    def is_invariant(self, g: BitMatrix) -> bool:
        return g @ self.gram @ g.transpose() == self.gram

    def transvection(self, v: int) -> BitMatrix:
        """``x -> x + f(x, v) v``."""
        phi = self.functional(v)
        return BitMatrix(tuple((1 << i) ^ (v if (phi >> i) & 1 else 0) for i in range(self.dim)), self.dim)

    def change_basis(self, b: BitMatrix) -> BitMatrix:
        """Gram matrix with respect to the rows of ``b``."""
        return b @ self.gram @ b.transpose()


@dataclass(frozen=True)
class QuadraticForm:
    """``Q(v) = sum v_i q_i + sum_{i<j} v_i v_j f(e_i, e_j)``."""

    values_on_basis: BitVector
    bilinear: SymplecticForm

    def __post_init__(self):
        if self.values_on_basis.n != self.bilinear.dim:
            raise ValueError("dimension mismatch between Q and f")
        g = self.bilinear.gram
        upper = tuple(r & ~((1 << (i + 1)) - 1) for i, r in enumerate(g.rows))
        object.__setattr__(self, "_upper", upper)

    @classmethod
    def plus(cls, n: int) -> "QuadraticForm":
        """``x0 x1 + x2 x3 + ...``, Witt index n/2."""
        return cls(BitVector(n, 0), SymplecticForm.standard(n))

    @classmethod
    def minus(cls, n: int) -> "QuadraticForm":
        """Plus type with the last hyperbolic pair replaced by an anisotropic one."""
        q = (1 << (n - 2)) | (1 << (n - 1))
        return cls(BitVector(n, q), SymplecticForm.standard(n))

    @property
    def dim(self) -> int:
        return self.bilinear.dim

    def __call__(self, v: int) -> int:
        return parity(v & self.values_on_basis.bits) ^ parity(vec_mat(v, self._upper) & v)

    def is_invariant(self, g: BitMatrix) -> bool:
        return self.bilinear.is_invariant(g) and all(
            self(g.apply(1 << i)) == self(1 << i) for i in range(self.dim)
        )

    def radical(self) -> Subspace:
        return self.bilinear.radical()

    def nonsingular_vectors(self) -> list[int]:
        return [v for v in range(1, 1 << self.dim) if self(v)]

    def witt_sign(self) -> int:
        """+1 or -1 for a nondegenerate form, read off the count of Q=1 vectors."""
        n = self.dim
        count = len(self.nonsingular_vectors())
        m = n // 2
        if count == (1 << (n - 1)) - (1 << (m - 1)):
            return 1
        if count == (1 << (n - 1)) + (1 << (m - 1)):
            return -1
        raise ValueError("form is degenerate or of odd dimension")


def order_gl(n: int, q: int = 2) -> int:
    return prod(q**n - q**i for i in range(n))


def order_sp(n: int) -> int:
    m = n // 2
    return 2 ** (m * m) * prod(4**i - 1 for i in range(1, m + 1))


def order_omega(n: int, sign: int) -> int:
    m = n // 2
    return 2 ** (m * (m - 1)) * (2**m - sign) * prod(4**i - 1 for i in range(1, m))


def order_alt(k: int) -> int:
    return factorial(k) // 2


def order_gl4(k: int) -> int:
    return order_gl(k, 4)


def order_gu(k: int) -> int:
    return 2 ** (k * (k - 1) // 2) * prod(2**i - (-1) ** i for i in range(1, k + 1))
