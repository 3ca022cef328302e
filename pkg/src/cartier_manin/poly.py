"""Sparse bivariate polynomials over F_p and the mixed-derivative selector."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ContractError, InvalidModulusError
from .modp import check_prime

# Exponents stay well inside a machine word: (p - 1) * d + d < 2**31.
MAX_EXPONENT = 2**31 - 1


class Monomial(NamedTuple):
    i: int
    j: int


class SparseBivarPoly:
    """Polynomial in ``x, y`` with coefficients in F_p, stored as ``{(i, j): c}``.

    Zero coefficients are never stored.  Iteration is always in lexicographic
    order of the exponent pair, so printed and serialised output is stable.
    """

    __slots__ = ("p", "_terms")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable[tuple[tuple[int, int], int]] = (), p: int = 2):
        self.p = check_prime(p)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for (i, j), c in items:
            if i < 0 or j < 0 or i > MAX_EXPONENT or j > MAX_EXPONENT:
                raise ValueError(f"exponent out of range: ({i}, {j})")
            key = Monomial(int(i), int(j))
            acc[key] = (acc.get(key, 0) + int(c)) % self.p
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _from_clean(cls, terms: dict, p: int) -> SparseBivarPoly:
        f = cls.__new__(cls)
        f.p = p
        f._terms = terms
        return f

    @classmethod
    def constant(cls, c: int, p: int) -> SparseBivarPoly:
        return cls({(0, 0): c}, p)

    @classmethod
    def monomial(cls, i: int, j: int, p: int, c: int = 1) -> SparseBivarPoly:
        return cls({(i, j): c}, p)

    def terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, i: int, j: int) -> int:
        return self._terms.get((i, j), 0)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseBivarPoly):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self):
        return hash((self.p, tuple(self.terms())))

    def _check(self, other: SparseBivarPoly) -> None:
        if self.p != other.p:
            raise InvalidModulusError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: SparseBivarPoly) -> SparseBivarPoly:
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = (out.get(k, 0) + c) % self.p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SparseBivarPoly._from_clean(out, self.p)

    def __neg__(self) -> SparseBivarPoly:
        return SparseBivarPoly._from_clean({k: self.p - c for k, c in self._terms.items()}, self.p)

    def __sub__(self, other: SparseBivarPoly) -> SparseBivarPoly:
        return self + (-other)

    def __mul__(self, other: SparseBivarPoly) -> SparseBivarPoly:
        return poly_mul(self, other)

    def scale(self, c: int) -> SparseBivarPoly:
        c %= self.p
        return SparseBivarPoly._from_clean({k: v * c % self.p for k, v in self._terms.items()} if c else {}, self.p)

    def shift(self, i: int, j: int) -> SparseBivarPoly:
        """Multiply by the monomial ``x**i * y**j``."""
        return SparseBivarPoly._from_clean({Monomial(a + i, b + j): c for (a, b), c in self._terms.items()}, self.p)

    def __repr__(self) -> str:
        return f"SparseBivarPoly({format_poly(self)!r}, p={self.p})"


def format_poly(f: SparseBivarPoly) -> str:
    """Human-readable form, highest exponents first, e.g. ``x^6 + 2*x^3*y^3 + 1``."""
    if not f:
        return "0"
    parts = []
    for (i, j), c in reversed(f.terms()):
        factors = [] if c == 1 and (i or j) else [str(c)]
        if i:
            factors.append("x" if i == 1 else f"x^{i}")
        if j:
            factors.append("y" if j == 1 else f"y^{j}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def poly_mul(f: SparseBivarPoly, g: SparseBivarPoly) -> SparseBivarPoly:
    f._check(g)
    p = f.p
    out: dict[Monomial, int] = {}
    for (a, b), c in f._terms.items():
        for (u, v), d in g._terms.items():
            key = Monomial(a + u, b + v)
            out[key] = (out.get(key, 0) + c * d) % p
    return SparseBivarPoly._from_clean({k: v for k, v in out.items() if v}, p)


def poly_pow(f: SparseBivarPoly, e: int) -> SparseBivarPoly:
    """``f**e`` by binary exponentiation; ``f**0 == 1``."""
    if e < 0:
        raise ValueError("negative exponent")
    result = SparseBivarPoly.constant(1, f.p)
    base = f
    while e:
        if e & 1:
            result = poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result


def partial_x(f: SparseBivarPoly) -> SparseBivarPoly:
    return SparseBivarPoly(((Monomial(i - 1, j), c * i) for (i, j), c in f._terms.items() if i), f.p)


def partial_y(f: SparseBivarPoly) -> SparseBivarPoly:
    return SparseBivarPoly(((Monomial(i, j - 1), c * j) for (i, j), c in f._terms.items() if j), f.p)


def nabla(f: SparseBivarPoly) -> SparseBivarPoly:
    """Mixed derivative of order ``p - 1`` in each variable, over F_p.

    The coefficient of ``x**(a*p + p - 1) * y**(b*p + p - 1)`` lands on
    ``x**(a*p) * y**(b*p)``; every other term is annihilated.  The
    factor ``((p-1)!)**2`` produced by differentiation is ``1`` by Wilson's
    theorem.
    """
    p = f.p
    out = {}
    for (i, j), c in f._terms.items():
        if i % p == p - 1 and j % p == p - 1:
            out[Monomial(i - (p - 1), j - (p - 1))] = c
    return SparseBivarPoly._from_clean(out, p)


def root_p(f: SparseBivarPoly) -> SparseBivarPoly:
    """p-th root of a polynomial in ``x**p, y**p`` with prime-field coefficients."""
    p = f.p
    out = {}
    for (i, j), c in f._terms.items():
        if i % p or j % p:
            raise ContractError(f"term x^{i} y^{j} is not a p-th power (p = {p})")
        out[Monomial(i // p, j // p)] = c
    return SparseBivarPoly._from_clean(out, p)


def frobenius(f: SparseBivarPoly) -> SparseBivarPoly:
    """``f**p``, i.e. every exponent multiplied by ``p`` (prime-field coefficients)."""
    p = f.p
    return SparseBivarPoly._from_clean({Monomial(i * p, j * p): c for (i, j), c in f._terms.items()}, p)


def evaluate(f: SparseBivarPoly, x: int, y: int) -> int:
    p = f.p
    return sum(c * pow(x, i, p) * pow(y, j, p) for (i, j), c in f._terms.items()) % p
