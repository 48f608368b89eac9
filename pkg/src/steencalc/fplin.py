"""Dense linear algebra over the prime field F_p.

Matrices are numpy int64 arrays kept reduced into [0, p).  Row reduction
always takes the leftmost pivot column and, within it, the smallest row
index, so every derived basis is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NoSolution(ValueError):
    """Raised by :func:`solve` when the target is outside the column span."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def check_odd_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return int(p)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    p: int
    a: np.ndarray

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p}")
        arr = np.asarray(self.a, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")
        object.__setattr__(self, "a", np.mod(arr, self.p))

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, p, rows, cols=None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(p, 0, cols or 0)
        return cls(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T.copy())

    def _check(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("mismatched moduli")
        return other

    def __matmul__(self, other):
        other = self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return FpMatrix(self.p, (self.a @ other.a) % self.p)

    def __add__(self, other):
        other = self._check(other)
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other):
        other = self._check(other)
        return FpMatrix(self.p, self.a - other.a)

    def __neg__(self):
        return FpMatrix(self.p, -self.a)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a * (c % self.p))

    def __pow__(self, n: int) -> "FpMatrix":
        if self.rows != self.cols or n < 0:
            raise ValueError("power needs a square matrix and n >= 0")
        out = FpMatrix.identity(self.p, self.rows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.a.any()

    def column(self, j: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a[:, j : j + 1].copy())

    def tolist(self):
        return self.a.tolist()

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.a.tolist()})"

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self) -> "FpMatrix":
        return kernel_basis(self)


def hstack(mats, p=None, rows=None) -> FpMatrix:
    mats = list(mats)
    if not mats:
        return FpMatrix.zeros(p, rows or 0, 0)
    return FpMatrix(mats[0].p, np.hstack([m.a for m in mats]))


def vstack(mats, p=None, cols=None) -> FpMatrix:
    mats = list(mats)
    if not mats:
        return FpMatrix.zeros(p, 0, cols or 0)
    return FpMatrix(mats[0].p, np.vstack([m.a for m in mats]))


def block_diag(mats, p) -> FpMatrix:
    mats = list(mats)
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in mats:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return FpMatrix(p, out)


def kron(x: FpMatrix, y: FpMatrix) -> FpMatrix:
    return FpMatrix(x.p, np.kron(x.a, y.a))


def rref(m: FpMatrix):
    """Reduced row echelon form and the list of pivot columns."""
    p = m.p
    a = m.a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return FpMatrix(p, a), pivots


def rank(m: FpMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: FpMatrix) -> FpMatrix:
    """Columns form a basis of {v : m v = 0}; one column per free variable."""
    p = m.p
    n = m.cols
    if m.rows == 0:
        return FpMatrix.identity(p, n)
    red, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        out[f, j] = 1
        for i, pc in enumerate(pivots):
            out[pc, j] = (-red.a[i, f]) % p
    return FpMatrix(p, out)


def image_basis(m: FpMatrix) -> FpMatrix:
    """Pivot columns of m: a basis of its column span."""
    if m.rows == 0 or m.cols == 0:
        return FpMatrix.zeros(m.p, m.rows, 0)
    _, pivots = rref(m)
    return FpMatrix(m.p, m.a[:, pivots].copy())


def solve(m: FpMatrix, target: FpMatrix) -> FpMatrix:
    """One x with m @ x == target (column by column).

    Free variables are set to zero.  Raises NoSolution if some column of
    target is not in the column span of m.
    """
    if m.rows != target.rows:
        raise ValueError("row counts differ")
    p = m.p
    aug = FpMatrix(p, np.hstack([m.a, target.a]))
    red, pivots = rref(aug)
    n = m.cols
    bad = [c for c in pivots if c >= n]
    if bad:
        raise NoSolution("target is not in the column span")
    x = np.zeros((n, target.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red.a[i, n:]
    return FpMatrix(p, x)


def annihilator(sub: FpMatrix) -> FpMatrix:
    """Rows spanning the linear forms vanishing on the columns of sub.

    The result P has kernel exactly span(sub), so it serves as the
    projection onto the quotient by span(sub).
    """
    return kernel_basis(sub.T).T


def complement_section(proj: FpMatrix) -> FpMatrix:
    """A right inverse s of a surjective proj (proj @ s == identity)."""
    return solve(proj, FpMatrix.identity(proj.p, proj.rows))
