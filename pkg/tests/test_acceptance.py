"""Exit criteria: every check is exact (integer equality), one test per criterion."""

import time

import pytest

from cartier_manin.curves import fermat_expansion, hurwitz_expansion, make_fermat, make_hurwitz
from cartier_manin.engine import build_cartier_matrix, compute_invariants
from cartier_manin.formulas import (
    closed_form_fermat,
    closed_form_hurwitz,
    count_fermat_pairs,
    count_hurwitz_pairs,
    fermat_sp_minus_1_rank,
    variant_degree,
)
from cartier_manin.modp import mat_mul, mat_rank
from cartier_manin.poly import poly_pow

pytestmark = pytest.mark.acceptance

PRIMES = (2, 3, 5, 7)


def _fermat_ok(p, n, least=3):
    return n >= least and n % p != 0


def _hurwitz_ok(p, n):
    return n >= 2 and (n * n - n + 1) % p != 0


def test_c01_superspecial_hermitian_and_hurwitz(criterion):
    criterion("01 F_(p+1) has zero Cartier matrix (p <= 11); H_p superspecial (p <= 7)")
    for p in (2, 3, 5, 7, 11):
        r = compute_invariants(make_fermat(p, p + 1))
        assert (r.cartier_rank, r.a_number, r.superspecial) == (0, r.genus, True), p
    for p in PRIMES:
        r = compute_invariants(make_hurwitz(p, p))
        assert r.superspecial and r.a_number == r.genus and r.p_rank == 0, p


def test_c02_fermat_sp_plus_one_grid(criterion):
    criterion("02 Fermat n = sp+1: rank = s(s-1)p(p+1)/4, a = s(s+1)p(p-1)/4")
    checked = 0
    for p in PRIMES:
        for s in range(1, 5):
            n = s * p + 1
            if not _fermat_ok(p, n):
                continue
            r = compute_invariants(make_fermat(p, n))
            assert 4 * r.cartier_rank == s * (s - 1) * p * (p + 1), (p, s)
            assert 4 * r.a_number == s * (s + 1) * p * (p - 1), (p, s)
            assert (r.cartier_rank, r.a_number) == closed_form_fermat(p, s, "sp+1")
            checked += 1
    assert checked == 16


def test_c03_fermat_sp_minus_one_grid(criterion):
    criterion("03 Fermat n = sp-1: rank = four-branch formula, a = s(s-1)p(p-1)/4")
    checked = 0
    for p in PRIMES:
        for s in range(1, 5):
            n = s * p - 1
            if not _fermat_ok(p, n, least=4):
                continue
            r = compute_invariants(make_fermat(p, n))
            assert r.cartier_rank == fermat_sp_minus_1_rank(p, s), (p, s, r.cartier_rank)
            assert 4 * r.a_number == s * (s - 1) * p * (p - 1), (p, s)
            checked += 1
    assert checked == 13  # (2,1),(2,2) give n < 4; (3,1) gives n = 2


def test_c04_hurwitz_grids(criterion):
    criterion("04 Hurwitz n = sp and n = sp+1 closed forms, s <= 3")
    checked = 0
    for p in PRIMES:
        for s in range(1, 4):
            for variant in ("sp", "sp+1"):
                n = variant_degree(p, s, variant)
                if not _hurwitz_ok(p, n):
                    continue
                r = compute_invariants(make_hurwitz(p, n))
                if variant == "sp":
                    expected = (s * (s - 1) * p * (p + 1) // 4, s * (s + 1) * p * (p - 1) // 4)
                else:
                    expected = (s * (s + 1) * p * (p + 1) // 4, s * (s - 1) * p * (p - 1) // 4)
                assert (r.cartier_rank, r.a_number) == expected == closed_form_hurwitz(p, s, variant), (p, s, variant)
                checked += 1
    assert checked == 24


def test_c05_counting_equals_rank(criterion):
    criterion("05 congruence counts equal matrix ranks, p in {2,3,5,7}, n <= 13")
    for p in PRIMES:
        for n in range(2, 14):
            if _fermat_ok(p, n):
                assert count_fermat_pairs(p, n) == mat_rank(build_cartier_matrix(make_fermat(p, n)).M), ("F", p, n)
            if _hurwitz_ok(p, n):
                assert count_hurwitz_pairs(p, n) == mat_rank(build_cartier_matrix(make_hurwitz(p, n)).M), ("H", p, n)


def test_c06_fermat_13_in_characteristic_3(criterion):
    criterion("06 F_13 at p = 3: genus 66, a-number 30, 3-rank 21, under 10 s")
    t0 = time.perf_counter()
    r = compute_invariants(make_fermat(3, 13))
    elapsed = time.perf_counter() - t0
    assert (r.genus, r.a_number, r.p_rank) == (66, 30, 21)
    assert elapsed < 10.0


def test_c07_characteristic_two(criterion):
    criterion("07 p = 2, odd 5 <= n <= 21: a = (n^2-1)/8, kernel = even-even columns, 3 <= rank < g-1")
    for n in range(5, 22, 2):
        c = make_fermat(2, n)
        M = build_cartier_matrix(c).M
        rank = mat_rank(M)
        a = c.g - rank
        assert 8 * a == n * n - 1, n
        zero_cols = {c.basis[k] for k in range(c.g) if not M.array[:, k].any()}
        even_even = {m for m in c.basis if m.i % 2 == 0 and m.j % 2 == 0}
        # The even-even columns vanish and there are exactly a of them, so they span the kernel.
        assert zero_cols == even_even and len(even_even) == a, n
        assert 3 <= rank == c.g - (n * n - 1) // 8 < c.g - 1, n


def test_c08_classification_laws(criterion):
    criterion("08 a = g iff n | p+1, p-rank = g iff n | p-1 (p in 3..13, 4 <= n <= 14)")
    for p in (3, 5, 7, 11, 13):
        for n in range(4, 15):
            if n % p == 0:
                continue
            r = compute_invariants(make_fermat(p, n))
            assert (r.a_number == r.genus) == ((p + 1) % n == 0), (p, n)
            assert (r.p_rank == r.genus) == ((p - 1) % n == 0), (p, n)


def test_c09_nilpotency_of_f5_in_characteristic_2(criterion):
    criterion("09 F_5 at p = 2: M != 0, M^2 = 0, nilpotency index 2")
    c = make_fermat(2, 5)
    M = build_cartier_matrix(c).M
    assert not M.is_zero()
    assert mat_mul(M, M).is_zero()
    assert compute_invariants(c).nilpotency_index == 2


def test_c10_path_independence(criterion):
    criterion("10 fused = unfused construction (g <= 120); family expansions = poly_pow (p <= 5, n <= 11)")
    curves = []
    for p in (2, 3, 5, 7, 11, 13):
        for n in range(2, 17):
            if _fermat_ok(p, n):
                curves.append(make_fermat(p, n))
            if _hurwitz_ok(p, n):
                curves.append(make_hurwitz(p, n))
    curves = [c for c in curves if c.g <= 120]
    assert len(curves) > 100
    for c in curves:
        fused = build_cartier_matrix(c).M
        assert fused == build_cartier_matrix(c, fused=False, fast=False).M, (c.label, c.p)
        assert fused == build_cartier_matrix(c, fused=True, fast=False).M, (c.label, c.p)

    for p in (2, 3, 5):
        for n in range(2, 12):
            if _fermat_ok(p, n):
                c = make_fermat(p, n)
                base = poly_pow(c.F, p - 1)
                assert all(fermat_expansion(p, n, i, j) == base.shift(i, j) for i, j in c.basis), (p, n)
            if _hurwitz_ok(p, n):
                c = make_hurwitz(p, n)
                base = poly_pow(c.F, p - 1)
                assert all(hurwitz_expansion(p, n, i, j) == base.shift(i, j) for i, j in c.basis), (p, n)
