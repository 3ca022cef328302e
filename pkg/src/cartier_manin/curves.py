"""Plane curve models: Fermat, Hurwitz and general nonsingular affine equations."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import BasisError, DegreeError, FamilyConditionError
from .modp import check_prime, lucas_binomial
from .poly import Monomial, SparseBivarPoly, partial_x, partial_y


class Family(str, Enum):
    FERMAT = "fermat"
    HURWITZ = "hurwitz"
    GENERAL = "general"


def adjoint_basis(d: int) -> tuple[Monomial, ...]:
    """Monomials ``x^i y^j`` with ``i + j <= d - 3`` in lexicographic order."""
    return tuple(Monomial(i, j) for i in range(d - 2) for j in range(d - 2 - i))


@dataclass(frozen=True)
class CurveModel:
    """Affine model ``F(x, y) = 0`` of a nonsingular plane curve over F_p.

    ``basis`` indexes the holomorphic differentials ``x^i y^j dx / F_y``.
    """

    family: Family
    p: int
    F: SparseBivarPoly
    n: int | None = None
    d: int = field(init=False)
    g: int = field(init=False)
    basis: tuple[Monomial, ...] = field(init=False, repr=False)

    def __post_init__(self):
        d = self.F.degree
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "g", (d - 1) * (d - 2) // 2)
        object.__setattr__(self, "basis", adjoint_basis(d))

    @property
    def F_x(self) -> SparseBivarPoly:
        return partial_x(self.F)

    @property
    def F_y(self) -> SparseBivarPoly:
        return partial_y(self.F)

    @property
    def label(self) -> str:
        if self.family is Family.FERMAT:
            return f"F_{self.n}"
        if self.family is Family.HURWITZ:
            return f"H_{self.n}"
        return "general"

    def index_of(self, m: tuple[int, int]) -> int:
        i, j = m
        # Position in the lexicographic basis: rows for x-exponents < i come first.
        top = self.d - 3
        return sum(top - a + 1 for a in range(i)) + j


def fermat_poly(p: int, n: int) -> SparseBivarPoly:
    return SparseBivarPoly({(n, 0): 1, (0, n): 1, (0, 0): 1}, p)


def hurwitz_poly(p: int, n: int) -> SparseBivarPoly:
    return SparseBivarPoly({(n, 1): 1, (0, n): 1, (1, 0): 1}, p)


def make_fermat(p: int, n: int) -> CurveModel:
    p = check_prime(p)
    if n < 3:
        raise DegreeError(f"Fermat curve needs n >= 3, got {n}")
    if n % p == 0:
        raise FamilyConditionError(f"Fermat curve needs p not dividing n (p = {p}, n = {n})")
    return CurveModel(Family.FERMAT, p, fermat_poly(p, n), n)


def make_hurwitz(p: int, n: int) -> CurveModel:
    p = check_prime(p)
    if n < 2:
        raise DegreeError(f"Hurwitz curve needs n >= 2, got {n}")
    if (n * n - n + 1) % p == 0:
        raise FamilyConditionError(f"Hurwitz curve needs p not dividing n^2 - n + 1 = {n * n - n + 1} (p = {p})")
    return CurveModel(Family.HURWITZ, p, hurwitz_poly(p, n), n)


def make_general(p: int, F: SparseBivarPoly) -> CurveModel:
    """Wrap an arbitrary affine equation; nonsingularity is the caller's obligation.

    Coefficients are taken in F_p (``F.p`` must equal ``p``).  See
    :func:`cartier_manin.engine.scan_singular_points` for a finite desk check.
    """
    p = check_prime(p)
    if F.p != p:
        raise FamilyConditionError(f"polynomial is over F_{F.p}, expected F_{p}")
    if F.degree < 4:
        raise DegreeError(f"plane model needs degree >= 4, got {F.degree}")
    return CurveModel(Family.GENERAL, p, F)


def _check_basis_index(i: int, j: int, top: int) -> None:
    if i < 0 or j < 0 or i + j > top:
        raise BasisError(f"(i, j) = ({i}, {j}) outside the adjoint range i + j <= {top}")


def fermat_expansion(p: int, n: int, i: int = 0, j: int = 0, constant: int = 1) -> SparseBivarPoly:
    """``(x^n + y^n + constant)^(p-1) * x^i * y^j`` from the closed double sum.

    Summand ``(h, k)`` is ``C(p-1, h) C(h, k) constant^(h-k) x^(n(p-1-h)+i) y^(nk+j)``.
    The default matches the stored equation ``x^n + y^n + 1``; ``constant=-1``
    gives the signed expansion of ``x^n + y^n - 1``, a model isomorphic to
    it only over an extension of F_p (same ranks, different matrix entries).
    """
    p = check_prime(p)
    if n % p == 0:
        raise FamilyConditionError(f"p = {p} divides n = {n}")
    _check_basis_index(i, j, n - 3)
    terms = []
    for h in range(p):
        bh = lucas_binomial(p - 1, h, p)
        for k in range(h + 1):
            c = bh * lucas_binomial(h, k, p) * pow(constant, h - k, p)
            terms.append(((n * (p - 1 - h) + i, n * k + j), c))
    return SparseBivarPoly(terms, p)


def hurwitz_expansion(p: int, n: int, i: int = 0, j: int = 0) -> SparseBivarPoly:
    """``(x^n y + y^n + x)^(p-1) * x^i * y^j`` from the closed double sum.

    Summand ``(h, k)`` is ``C(p-1, h) C(h, k) x^(nk-h+p-1+i) y^(n(h-k)+k+j)``:
    ``k`` factors ``x^n y``, ``h - k`` factors ``y^n`` and ``p - 1 - h``
    factors ``x``.
    """
    p = check_prime(p)
    if (n * n - n + 1) % p == 0:
        raise FamilyConditionError(f"p = {p} divides n^2 - n + 1 = {n * n - n + 1}")
    _check_basis_index(i, j, n - 2)
    terms = []
    for h in range(p):
        bh = lucas_binomial(p - 1, h, p)
        for k in range(h + 1):
            terms.append(((n * k - h + p - 1 + i, n * (h - k) + k + j), bh * lucas_binomial(h, k, p)))
    return SparseBivarPoly(terms, p)
