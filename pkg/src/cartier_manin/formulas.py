"""Counting criteria and closed-form ranks for Fermat and Hurwitz curves.

These are independent of the matrix construction in :mod:`cartier_manin.engine`
and exist to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import Family, adjoint_basis
from .errors import DegreeError, FamilyConditionError
from .modp import check_prime
from .poly import Monomial


def _fermat_solvable(p: int, n: int, i: int, j: int) -> bool:
    for h in range(p):
        if (n * (p - 1 - h) + i - (p - 1)) % p:
            continue
        for k in range(h + 1):
            if (n * k + j - (p - 1)) % p == 0:
                return True
    return False


def _hurwitz_solvable(p: int, n: int, i: int, j: int) -> bool:
    for h in range(p):
        for k in range(h + 1):
            if (n * k - h + i) % p == 0 and (n * (h - k) + k + j - (p - 1)) % p == 0:
                return True
    return False


def count_fermat_pairs(p: int, n: int) -> int:
    """Number of ``(i, j)``, ``i + j <= n - 3``, for which the Fermat congruence system has a solution."""
    p = check_prime(p)
    if n < 3:
        raise DegreeError(f"Fermat curve needs n >= 3, got {n}")
    if n % p == 0:
        raise FamilyConditionError(f"p = {p} divides n = {n}")
    return sum(_fermat_solvable(p, n, i, j) for i, j in adjoint_basis(n))


def count_hurwitz_pairs(p: int, n: int) -> int:
    """Number of ``(i, j)``, ``i + j <= n - 2``, for which the Hurwitz congruence system has a solution."""
    p = check_prime(p)
    if n < 2:
        raise DegreeError(f"Hurwitz curve needs n >= 2, got {n}")
    if (n * n - n + 1) % p == 0:
        raise FamilyConditionError(f"p = {p} divides n^2 - n + 1")
    return sum(_hurwitz_solvable(p, n, i, j) for i, j in adjoint_basis(n + 1))


def _exact(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"{what} evaluated to a non-integer {q}")
    return int(q)


def _quarter(*factors: int) -> Fraction:
    out = Fraction(1, 4)
    for f in factors:
        out *= f
    return out


def fermat_sp_minus_1_rank(p: int, s: int) -> int:
    """Four-branch rank of the Cartier operator on ``F_(sp-1)``, evaluated exactly as stated."""
    if s == 1:
        return _exact(Fraction((p - 2) * (p - 3), 2), "rank")
    if s == 2:
        return _exact(Fraction((p - 2) * (p - 3), 2) + p * (p - 2), "rank")
    if s == 3:
        return 3 * (p - 1) ** 2
    return _exact(3 * (p - 1) ** 2 + Fraction(p * ((p + 1) * s * s + (p - 11) * s - 12 * (p - 2)), 4), "rank")


VARIANTS_FERMAT = ("sp+1", "sp-1")
VARIANTS_HURWITZ = ("sp", "sp+1")


def variant_degree(p: int, s: int, variant: str) -> int:
    return {"sp+1": s * p + 1, "sp-1": s * p - 1, "sp": s * p}[variant]


def closed_form_fermat(p: int, s: int, variant: str) -> tuple[int, int]:
    """``(rank, a_number)`` of ``F_n`` for ``n = sp + 1`` or ``n = sp - 1``."""
    p = check_prime(p)
    if variant not in VARIANTS_FERMAT:
        raise ValueError(f"Fermat variant must be one of {VARIANTS_FERMAT}, got {variant!r}")
    if s < 1:
        raise FamilyConditionError("multiplier s must be >= 1")
    n = variant_degree(p, s, variant)
    if n < (4 if variant == "sp-1" else 3) or n % p == 0:
        raise FamilyConditionError(f"n = {n} violates the Fermat hypotheses at p = {p}")
    if variant == "sp+1":
        rank = _exact(_quarter(s, s - 1, p, p + 1), "rank")
        a = _exact(_quarter(s, s + 1, p, p - 1), "a-number")
    else:
        rank = fermat_sp_minus_1_rank(p, s)
        a = _exact(_quarter(s, s - 1, p, p - 1), "a-number")
    return rank, a


def closed_form_hurwitz(p: int, s: int, variant: str) -> tuple[int, int]:
    """``(rank, a_number)`` of ``H_n`` for ``n = sp`` or ``n = sp + 1``."""
    p = check_prime(p)
    if variant not in VARIANTS_HURWITZ:
        raise ValueError(f"Hurwitz variant must be one of {VARIANTS_HURWITZ}, got {variant!r}")
    if s < 1:
        raise FamilyConditionError("multiplier s must be >= 1")
    n = variant_degree(p, s, variant)
    if n < 2 or (n * n - n + 1) % p == 0:
        raise FamilyConditionError(f"n = {n} violates the Hurwitz hypotheses at p = {p}")
    if variant == "sp":
        rank = _exact(_quarter(s, s - 1, p, p + 1), "rank")
        a = _exact(_quarter(s, s + 1, p, p - 1), "a-number")
    else:
        rank = _exact(_quarter(s, s + 1, p, p + 1), "rank")
        a = _exact(_quarter(s, s - 1, p, p - 1), "a-number")
    return rank, a


def a_fermat_char2(n: int) -> tuple[int, list[Monomial]]:
    """a-number of ``F_n`` in characteristic 2 and the even-even monomials spanning the kernel."""
    if n % 2 == 0:
        raise FamilyConditionError(f"n must be odd in characteristic 2, got {n}")
    if n < 5:
        raise DegreeError(f"need n >= 5, got {n}")
    kernel = [m for m in adjoint_basis(n) if m.i % 2 == 0 and m.j % 2 == 0]
    return (n * n - 1) // 8, kernel


@dataclass(frozen=True)
class FamilyQuery:
    family: Family
    p: int
    n: int
    variant: str | None = None
    s: int | None = None


def detect_variant(family: Family | str, p: int, n: int) -> FamilyQuery:
    """Match ``n`` against the degree shapes that have a closed form for ``family``."""
    family = Family(family)
    shapes = VARIANTS_FERMAT if family is Family.FERMAT else VARIANTS_HURWITZ if family is Family.HURWITZ else ()
    for variant in shapes:
        offset = {"sp+1": 1, "sp-1": -1, "sp": 0}[variant]
        s, r = divmod(n - offset, p)
        if r == 0 and s >= 1:
            return FamilyQuery(family, p, n, variant, s)
    return FamilyQuery(family, p, n)


def closed_form(query: FamilyQuery) -> tuple[int, int] | None:
    if query.variant is None:
        return None
    fn = closed_form_fermat if query.family is Family.FERMAT else closed_form_hurwitz
    try:
        return fn(query.p, query.s, query.variant)
    except FamilyConditionError:
        return None


def count_pairs(family: Family | str, p: int, n: int) -> int:
    family = Family(family)
    if family is Family.FERMAT:
        return count_fermat_pairs(p, n)
    if family is Family.HURWITZ:
        return count_hurwitz_pairs(p, n)
    raise ValueError("counting applies to the Fermat and Hurwitz families only")
