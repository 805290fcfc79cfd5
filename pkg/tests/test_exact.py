"""Exact integer linear algebra: SNF factorization contract, extended
gcd, linear congruences, determinants."""

import random
from math import gcd

import pytest

from grouprelax import IntMatrix, det_exact, ext_gcd, is_unimodular, snf, solve_mod
from grouprelax.errors import Infeasible


def check_snf_contract(M):
    fact = snf(M)
    m, n = M.rows, M.cols
    assert fact.U @ fact.diag_matrix(m, n) @ fact.V == M
    assert fact.U @ fact.Uinv == IntMatrix.identity(m)
    assert fact.V @ fact.Vinv == IntMatrix.identity(n)
    assert abs(det_exact(fact.U)) == 1
    assert abs(det_exact(fact.V)) == 1
    D = fact.D
    assert all(d >= 0 for d in D)
    nz = [d for d in D if d]
    assert D[: len(nz)] == nz, "zero factors must trail"
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    return fact


def test_snf_identity():
    fact = check_snf_contract(IntMatrix.identity(2))
    assert fact.D == [1, 1]


def test_snf_small_known_factors():
    # gcd of k-by-k minors: d1 = 2, d1*d2 = |det| = 8
    fact = check_snf_contract(IntMatrix([[2, 4], [6, 8]]))
    assert fact.D == [2, 4]


def test_snf_zero_matrix():
    fact = check_snf_contract(IntMatrix([[0, 0], [0, 0]]))
    assert fact.D == [0, 0]


def test_snf_rectangular():
    check_snf_contract(IntMatrix([[2, 4, 6]]))
    check_snf_contract(IntMatrix([[3], [6], [9]]))


def test_ext_gcd_cases():
    for a, b in [(4, 6), (0, 5), (240, 46), (-8, 12), (0, 0), (7, -3)]:
        g, x, y = ext_gcd(a, b)
        assert g == gcd(a, b)
        assert a * x + b * y == g
    assert ext_gcd(0, 5) == (5, 0, 1)


def test_solve_mod_examples():
    assert solve_mod(4, 2, 6) == (2, 2)
    assert solve_mod(1, 3, 7) == (3, 1)
    with pytest.raises(Infeasible):
        solve_mod(2, 1, 4)


def test_solve_mod_against_enumeration():
    rng = random.Random(7)
    for _ in range(300):
        r = rng.randint(1, 60)
        t = rng.randint(-2 * r, 2 * r)
        b = rng.randint(-2 * r, 2 * r)
        sols = [y for y in range(r) if (t * y - b) % r == 0]
        if not sols:
            with pytest.raises(Infeasible):
                solve_mod(t, b, r)
            continue
        particular, count = solve_mod(t, b, r)
        assert particular == min(sols)
        assert count == len(sols)
        step = r // count
        assert sols == [particular + k * step for k in range(count)]


def test_is_unimodular():
    assert is_unimodular(IntMatrix.identity(3))
    assert not is_unimodular(IntMatrix([[2, 0], [0, 2]]))
    assert is_unimodular(IntMatrix([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        is_unimodular(IntMatrix([[1, 2]]))


def test_det_exact_matches_cofactor_expansion():
    rng = random.Random(3)

    def det_ref(a):
        n = len(a)
        if n == 1:
            return a[0][0]
        return sum(
            (-1) ** j * a[0][j] * det_ref([row[:j] + row[j + 1:] for row in a[1:]])
            for j in range(n)
        )

    for _ in range(60):
        n = rng.randint(1, 4)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det_exact(IntMatrix(a)) == det_ref(a)


def test_snf_random_fuzz():
    rng = random.Random(11)
    for _ in range(120):
        m = rng.randint(1, 6)
        n = rng.randint(1, 6)
        M = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        fact = check_snf_contract(M)
        if m == n:
            det = abs(det_exact(M))
            if det:
                prod = 1
                for d in fact.D:
                    prod *= d
                assert prod == det
