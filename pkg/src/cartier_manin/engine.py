"""Cartier-Manin matrices of plane curves and the invariants derived from them."""

from __future__ import annotations

import itertools
import time
from collections import defaultdict
from concurrent.futures import Executor
from dataclasses import dataclass, field

import numpy as np

from .curves import CurveModel, Family, fermat_expansion, hurwitz_expansion
from .errors import ConsistencyError
from .modp import MatrixFp, mat_rank, stable_rank_and_index
from .poly import SparseBivarPoly, nabla, poly_pow, root_p


@dataclass(frozen=True)
class CartierMatrix:
    """Matrix of the Cartier operator in the basis ``x^a y^b dx / F_y``.

    Column ``(i, j)`` holds the coordinates of the image of ``x^i y^j dx / F_y``;
    row and column order follow ``curve.basis``.
    """

    curve: CurveModel
    M: MatrixFp
    expansion: str = "binary_power"

    def entry(self, row: tuple[int, int], col: tuple[int, int]) -> int:
        return self.M[self.curve.index_of(row), self.curve.index_of(col)]


def power_of_equation(curve: CurveModel, fast: bool = True) -> tuple[SparseBivarPoly, str]:
    """``F^(p-1)``, through the family's closed expansion when one applies."""
    p, n = curve.p, curve.n
    if fast and curve.family is Family.FERMAT:
        return fermat_expansion(p, n), "family_expansion"
    if fast and curve.family is Family.HURWITZ:
        return hurwitz_expansion(p, n), "family_expansion"
    return poly_pow(curve.F, p - 1), "binary_power"


def _residue_classes(Fp1: SparseBivarPoly) -> dict[tuple[int, int], list[tuple[int, int, int]]]:
    p = Fp1.p
    groups = defaultdict(list)
    for (u, v), c in Fp1.terms():
        groups[(u % p, v % p)].append((u, v, c))
    return groups


def _image_error(curve: CurveModel, col, a: int, b: int) -> ConsistencyError:
    return ConsistencyError(
        f"image of x^{col[0]} y^{col[1]} dx/F_y has term x^{a} y^{b} with a + b > {curve.d - 3}; "
        "the model is singular or has coefficients outside the prime field"
    )


def _fused_column(curve: CurveModel, groups, col) -> list[tuple[int, int]]:
    """Nonzero (row index, value) pairs of one column, read straight off ``F^(p-1)``."""
    p, top = curve.p, curve.d - 3
    i, j = col
    out = []
    for u, v, c in groups.get(((p - 1 - i) % p, (p - 1 - j) % p), ()):
        a, b = (u + i - (p - 1)) // p, (v + j - (p - 1)) // p
        if a < 0 or b < 0:
            continue
        if a + b > top:
            raise _image_error(curve, col, a, b)
        out.append((curve.index_of((a, b)), c))
    return out


def apply_cartier(curve: CurveModel, h: SparseBivarPoly, Fp1: SparseBivarPoly | None = None) -> SparseBivarPoly:
    """Numerator of the Cartier image of ``h dx / F_y``: ``root_p(nabla(F^(p-1) h))``."""
    if Fp1 is None:
        Fp1 = poly_pow(curve.F, curve.p - 1)
    return root_p(nabla(Fp1 * h))


def _unfused_column(curve: CurveModel, Fp1: SparseBivarPoly, col) -> list[tuple[int, int]]:
    top = curve.d - 3
    img = apply_cartier(curve, SparseBivarPoly.monomial(col[0], col[1], curve.p), Fp1)
    out = []
    for (a, b), c in img.terms():
        if a + b > top:
            raise _image_error(curve, col, a, b)
        out.append((curve.index_of((a, b)), c))
    return out


def matrix_from_images(curve: CurveModel, images: list[SparseBivarPoly]) -> MatrixFp:
    """Matrix whose columns are the given adjoint numerators in ``curve.basis`` coordinates."""
    g = curve.g
    a = np.zeros((g, g), dtype=MatrixFp.zeros(0, 0, curve.p).array.dtype)
    for col, img in enumerate(images):
        for (r, s), c in img.terms():
            if r + s > curve.d - 3:
                raise _image_error(curve, curve.basis[col], r, s)
            a[curve.index_of((r, s)), col] = c
    return MatrixFp(a, curve.p)


def build_cartier_matrix(
    curve: CurveModel,
    *,
    fused: bool = True,
    fast: bool = True,
    executor: Executor | None = None,
) -> CartierMatrix:
    """Assemble the g x g Cartier matrix column by column.

    Row ``(a, b)`` of column ``(i, j)`` is the coefficient of
    ``x^(ap+p-1) y^(bp+p-1)`` in ``F^(p-1) x^i y^j``.  With ``fused`` the
    shift is never materialised: the column reads the terms of ``F^(p-1)``
    whose exponents are congruent to ``(p-1-i, p-1-j)`` modulo ``p``.
    Columns are independent, so an ``executor`` may fill them concurrently.
    """
    Fp1, how = power_of_equation(curve, fast)
    if fused:
        groups = _residue_classes(Fp1)
        task = lambda col: _fused_column(curve, groups, col)  # noqa: E731
    else:
        task = lambda col: _unfused_column(curve, Fp1, col)  # noqa: E731
    columns = list(executor.map(task, curve.basis)) if executor else [task(c) for c in curve.basis]

    g = curve.g
    a = np.zeros((g, g), dtype=MatrixFp.zeros(0, 0, curve.p).array.dtype)
    for ci, entries in enumerate(columns):
        for ri, c in entries:
            a[ri, ci] = c
    return CartierMatrix(curve, MatrixFp(a, curve.p), how)


@dataclass(frozen=True)
class InvariantReport:
    family: str
    p: int
    n: int | None
    degree: int
    genus: int
    cartier_rank: int
    a_number: int
    p_rank: int
    nilpotency_index: int
    superspecial: bool
    ordinary: bool
    methods: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)


def invariants_from_matrix(cm: CartierMatrix, timings: dict | None = None) -> InvariantReport:
    curve, M = cm.curve, cm.M
    t0 = time.perf_counter()
    rank = mat_rank(M)
    t1 = time.perf_counter()
    p_rank, index = stable_rank_and_index(M, curve.g)
    t2 = time.perf_counter()
    timings = dict(timings or {})
    timings.update(rank=t1 - t0, powers=t2 - t1)
    return InvariantReport(
        family=curve.family.value,
        p=curve.p,
        n=curve.n,
        degree=curve.d,
        genus=curve.g,
        cartier_rank=rank,
        a_number=curve.g - rank,
        p_rank=p_rank,
        nilpotency_index=index,
        superspecial=M.is_zero(),
        ordinary=p_rank == curve.g,
        methods={
            "cartier_rank": "matrix",
            "a_number": "matrix",
            "p_rank": "matrix",
            "nilpotency_index": "matrix",
        },
        timings=timings,
    )


def compute_invariants(curve: CurveModel, *, fast: bool = True) -> InvariantReport:
    t0 = time.perf_counter()
    cm = build_cartier_matrix(curve, fast=fast)
    return invariants_from_matrix(cm, {"build": time.perf_counter() - t0})


def cartier_square_direct(curve: CurveModel) -> MatrixFp:
    """Matrix of the twice-iterated Cartier operator, applying the operator twice per basis element."""
    Fp1 = poly_pow(curve.F, curve.p - 1)
    images = []
    for i, j in curve.basis:
        once = apply_cartier(curve, SparseBivarPoly.monomial(i, j, curve.p), Fp1)
        images.append(apply_cartier(curve, once, Fp1))
    return matrix_from_images(curve, images)


# --- finite singularity scan -------------------------------------------------


class _ExtensionField:
    """F_{p^k} with elements encoded as integers in base ``p`` (digit t = coefficient of z^t)."""

    def __init__(self, p: int, k: int):
        self.p, self.k, self.q = p, k, p**k
        self.modulus = self._find_primitive_modulus()
        self._build_tables()

    def _digits(self, e: int) -> list[int]:
        out = []
        for _ in range(self.k):
            e, r = divmod(e, self.p)
            out.append(r)
        return out

    def _mulz(self, digits, modulus):
        # Multiply by z and reduce with the monic modulus of degree k.
        p, k = self.p, self.k
        top = digits[-1]
        shifted = [0] + digits[:-1]
        return [(shifted[t] - top * modulus[t]) % p for t in range(k)]

    def _order_of_z(self, modulus) -> int | None:
        one = [1] + [0] * (self.k - 1)
        cur = list(one)
        for e in range(1, self.q):
            cur = self._mulz(cur, modulus)
            if cur == one:
                return e
            if not any(cur):
                return None
        return None

    def _find_primitive_modulus(self) -> list[int]:
        if self.k == 1:
            return [0]
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            modulus = list(coeffs)
            if modulus[0] == 0:
                continue
            if self._order_of_z(modulus) == self.q - 1:
                return modulus
        raise RuntimeError("no primitive polynomial found")  # pragma: no cover

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        self.exp = np.zeros(2 * q, dtype=np.int64)
        self.log = np.full(q, -1, dtype=np.int64)
        if k == 1:
            gen = next(a for a in range(1, p) if all(pow(a, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
            val = 1
            for e in range(q - 1):
                self.exp[e] = val
                self.log[val] = e
                val = val * gen % p
        else:
            cur = [1] + [0] * (k - 1)
            weights = [p**t for t in range(k)]
            for e in range(q - 1):
                code = sum(d * w for d, w in zip(cur, weights))
                self.exp[e] = code
                self.log[code] = e
                cur = self._mulz(cur, self.modulus)
        self.exp[q - 1:2 * q - 2] = self.exp[: q - 1]
        weights = np.array([p**t for t in range(k)], dtype=np.int64)
        self.weights = weights
        self.digits = (np.arange(q)[:, None] // weights[None, :]) % p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def power(self, a: np.ndarray, e: int) -> np.ndarray:
        if e == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (((self.digits[a] + self.digits[b]) % self.p) * self.weights).sum(axis=-1)


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _evaluate_all_y(field_: _ExtensionField, f: SparseBivarPoly, x: int, ys: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(ys)
    xs = np.array([x])
    for (i, j), c in f.terms():
        coef = np.array([c])  # prime-field scalars embed as constant polynomials
        term = field_.mul(field_.mul(coef, field_.power(xs, i)), field_.power(ys, j))
        acc = field_.add(acc, np.broadcast_to(term, ys.shape))
    return acc


def scan_singular_points(curve: CurveModel, max_ext_degree: int = 1) -> list[tuple[int, int, int]]:
    """Affine points over ``F_(p^k)``, ``k <= max_ext_degree``, where ``F = F_x = F_y = 0``.

    Each point is reported once, as ``(k, x, y)`` for the smallest ``k`` whose
    field contains both coordinates, with field elements in the base-``p``
    integer encoding of :class:`_ExtensionField` for that degree.  An empty
    result only means that no singular point was found up to that degree.
    """
    if not 1 <= max_ext_degree <= 4:
        raise ValueError("max_ext_degree must lie in 1..4")
    polys = (curve.F, curve.F_x, curve.F_y)
    found = []
    for k in range(1, max_ext_degree + 1):
        fld = _ExtensionField(curve.p, k)
        smaller = [curve.p**d for d in range(1, k) if k % d == 0]
        ys = np.arange(fld.q)
        for x in range(fld.q):
            cand = ys
            for f in polys:
                cand = cand[_evaluate_all_y(fld, f, x, cand) == 0]
                if not cand.size:
                    break
            for y in cand:
                pt = np.array([x, int(y)])
                if any((fld.power(pt, q) == pt).all() for q in smaller):
                    continue
                found.append((k, x, int(y)))
    return found
