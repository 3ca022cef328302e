"""Exact arithmetic modulo a prime and dense matrices over F_p.

Scalars are plain Python ints in ``[0, p)``; the modulus travels with the
matrix (or is passed explicitly), never with individual entries.  Matrices
are backed by numpy ``int64`` arrays when every intermediate product fits in
a machine word, and by ``object`` arrays of Python ints otherwise, so no
floating point is involved anywhere.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import sparse
from sympy import isprime

from .errors import InvalidModulusError, ShapeError

_INT64_SAFE = 2**62


@lru_cache(maxsize=256)
def check_prime(p: int) -> int:
    """Return ``p`` unchanged if it is a prime, raise otherwise."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or not isprime(int(p)):
        raise InvalidModulusError(f"modulus must be prime, got {p!r}")
    return int(p)


def inv_mod(a: int, p: int) -> int:
    """Inverse of ``a`` modulo ``p`` (extended Euclid via ``pow``)."""
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, -1, p)


def lucas_binomial(n: int, k: int, p: int) -> int:
    """Binomial coefficient ``C(n, k) mod p`` computed digit by digit in base ``p``.

    By Lucas' theorem the residue is the product of the binomials of the
    base-``p`` digits; a single digit of ``k`` exceeding the matching digit
    of ``n`` makes the whole product vanish.
    """
    check_prime(p)
    if n < 0 or k < 0:
        raise ValueError("lucas_binomial expects nonnegative arguments")
    if k > n:
        return 0
    result = 1
    while k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = result * math.comb(nd, kd) % p
    return result


def _dtype_for(p: int):
    return np.int64 if (p - 1) * (p - 1) < _INT64_SAFE else object


class MatrixFp:
    """Dense matrix over the prime field F_p.

    Instances are treated as immutable: the backing array is flagged
    read-only and every operation returns a new matrix.
    """

    __slots__ = ("p", "_a")

    def __init__(self, entries, p: int):
        self.p = check_prime(p)
        a = np.array(entries, dtype=_dtype_for(self.p), copy=True)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ShapeError(f"matrix entries must be two-dimensional, got shape {a.shape}")
        a %= self.p
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> MatrixFp:
        m = cls.__new__(cls)
        m.p = p
        a.setflags(write=False)
        m._a = a
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> MatrixFp:
        p = check_prime(p)
        return cls._wrap(np.zeros((rows, cols), dtype=_dtype_for(p)), p)

    @classmethod
    def identity(cls, size: int, p: int) -> MatrixFp:
        p = check_prime(p)
        a = np.zeros((size, size), dtype=_dtype_for(p))
        np.fill_diagonal(a, 1)
        return cls._wrap(a, p)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._a

    def __getitem__(self, idx: tuple[int, int]) -> int:
        return int(self._a[idx])

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._a]

    def is_zero(self) -> bool:
        return not self._a.any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixFp):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool((self._a == other._a).all())

    def __hash__(self):
        return hash((self.p, self.shape, tuple(int(v) for v in self._a.ravel())))

    def __matmul__(self, other: MatrixFp) -> MatrixFp:
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"MatrixFp({self.tolist()!r}, p={self.p})"


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.dtype == object:
        return (a.dot(b)) % p
    nnz_row = int(np.count_nonzero(a, axis=1).max(initial=0))
    if nnz_row * (p - 1) * (p - 1) < _INT64_SAFE and np.count_nonzero(a) < 0.2 * a.size:
        # Sparse integer product; a row has so few terms that no sum can overflow.
        return np.asarray(sparse.csr_array(a) @ b) % p
    # Split the inner dimension so partial sums stay below 2**63.
    step = max(1, _INT64_SAFE // max(1, (p - 1) * (p - 1)))
    inner = a.shape[1]
    if inner <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, inner, step):
        out += (a[:, start:start + step] @ b[start:start + step, :]) % p
        out %= p
    return out


def mat_mul(A: MatrixFp, B: MatrixFp) -> MatrixFp:
    """Exact product ``A @ B`` over F_p."""
    if A.p != B.p:
        raise InvalidModulusError(f"modulus mismatch: {A.p} vs {B.p}")
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    return MatrixFp._wrap(_matmul_mod(A.array, B.array, A.p), A.p)


def mat_pow(M: MatrixFp, e: int) -> MatrixFp:
    if M.rows != M.cols:
        raise ShapeError("matrix power needs a square matrix")
    result = MatrixFp.identity(M.rows, M.p)
    base = M
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def mat_rank(M: MatrixFp) -> int:
    """Rank over F_p by row reduction with exact modular inverses."""
    p = M.p
    a = M.array.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv_mod(int(a[r, c]), p) % p
        below = a[r + 1:, c].copy()
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + r + 1
            a[idx] = (a[idx] - np.outer(below[hit], a[r]) % p) % p
        r += 1
    return r


def mat_rank_colpivot(M: MatrixFp) -> int:
    """Rank via column operations on plain Python lists.

    Deliberately shares no code with :func:`mat_rank`; used as its
    independent cross-check.
    """
    p = M.p
    # Work on the transpose's rows, i.e. the columns of M, choosing pivots
    # row by row of M (column pivoting) instead of column by column.
    cols = [[int(M.array[i, j]) for i in range(M.rows)] for j in range(M.cols)]
    rank = 0
    for i in range(M.rows):
        pivot = next((j for j in range(rank, len(cols)) if cols[j][i]), None)
        if pivot is None:
            continue
        cols[rank], cols[pivot] = cols[pivot], cols[rank]
        pc = cols[rank]
        inv = pow(pc[i], p - 2, p) if p > 2 else 1
        for j in range(len(cols)):
            if j != rank and cols[j][i]:
                f = cols[j][i] * inv % p
                cols[j] = [(x - f * y) % p for x, y in zip(cols[j], pc)]
        rank += 1
    return rank


def column_basis(A: MatrixFp) -> MatrixFp:
    """Columns spanning the column space of ``A`` (reduced, ``rank(A)`` of them)."""
    p = A.p
    a = A.array.T.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv_mod(int(a[r, c]), p) % p
        below = a[r + 1:, c].copy()
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + r + 1
            a[idx] = (a[idx] - np.outer(below[hit], a[r]) % p) % p
        r += 1
    return MatrixFp._wrap(np.ascontiguousarray(a[:r].T), p)


def stable_rank_and_index(M: MatrixFp, bound: int) -> tuple[int, int]:
    """Return ``(rank(M**bound), t)`` with ``t`` the least exponent reaching that rank.

    Instead of forming full powers, the image is pushed forward one step at a
    time: ``im(M**k) = M(im(M**(k-1)))``, carried as a column basis, so each
    step costs a product with a ``g x rank`` matrix.  Once the rank repeats
    the image has stabilised and the loop stops.  ``M**0`` is the identity,
    so ``t == 0`` exactly when ``M`` is invertible.
    """
    if M.rows != M.cols:
        raise ShapeError("stable rank needs a square matrix")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    p = M.p
    a = M.array
    if a.dtype != object and np.count_nonzero(a, axis=1).max(initial=0) * (p - 1) ** 2 < _INT64_SAFE:
        left = sparse.csr_array(a)  # converted once, reused for every step
        push = lambda b: np.asarray(left @ b) % p  # noqa: E731
    else:
        push = lambda b: _matmul_mod(a, b, p)  # noqa: E731
    prev_rank = M.rows
    image = M
    for k in range(1, bound + 1):
        image = column_basis(image)
        r = image.cols
        if r == prev_rank:
            return r, k - 1
        prev_rank = r
        if r == 0:
            return 0, k
        if k < bound:
            image = MatrixFp._wrap(push(image.array), p)
    return prev_rank, bound


def power_ranks(M: MatrixFp, upto: int) -> list[int]:
    """Ranks of ``M**0, M**1, ..., M**upto``."""
    ranks = [M.rows]
    power = MatrixFp.identity(M.rows, M.p)
    for _ in range(upto):
        power = mat_mul(power, M)
        ranks.append(mat_rank(power))
    return ranks
