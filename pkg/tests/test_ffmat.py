import itertools

import numpy as np
import pytest
import sympy
from sympy.polys.domains import GF

from subrep.errors import NoSolutionError
from subrep.ffmat import (
    CoordinateSolver,
    Matrix,
    Poly,
    PrimeField,
    char_poly,
    column_space_basis,
    factor,
    kernel_basis,
    left_kernel_basis,
    min_poly,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    rref,
    solve,
)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)
F7 = PrimeField(7)


def random_matrix(field, rows, cols, rng):
    return Matrix(field, rng.integers(0, field.p, size=(rows, cols)))


def test_prime_check():
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(1)
    PrimeField(2147483647)  # largest prime below 2^31


def test_rref_duplicate_rows_f2():
    m = Matrix(F2, [[1, 1], [1, 1]])
    r, pivots, rank = rref(m)
    assert r == Matrix(F2, [[1, 1], [0, 0]])
    assert rank == 1 and pivots == (0,)


def test_rref_identity():
    m = Matrix(F5, np.eye(3, dtype=int))
    r, _, rank = rref(m)
    assert r == m and rank == 3


def test_rref_hand_reduction_f7():
    # [[2,4],[1,2]]: scale row0 by 4 (=2^-1 mod 7), eliminate row1
    m = Matrix(F7, [[2, 4], [1, 2]])
    r, _, rank = rref(m)
    assert r == Matrix(F7, [[1, 2], [0, 0]]) and rank == 1


def test_kernel_zero_map():
    m = Matrix(F3, np.zeros((2, 3), dtype=int))
    k = kernel_basis(m)
    assert k.cols == 3 and k.rank() == 3


def test_kernel_parity_check_f2():
    k = kernel_basis(Matrix(F2, [[1, 1]]))
    assert k == Matrix(F2, [[1], [1]])


def test_kernel_by_enumeration_f3():
    m = Matrix(F3, [[0, 1], [0, 0]])
    k = kernel_basis(m)
    # enumerate all 9 vectors; kernel = span{(1,0)}
    members = {
        (a, b)
        for a, b in itertools.product(range(3), repeat=2)
        if (m @ Matrix(F3, [[a], [b]])).is_zero()
    }
    assert members == {(0, 0), (1, 0), (2, 0)}
    assert k == Matrix(F3, [[1], [0]])


def test_solve_identity_returns_rhs():
    rng = np.random.default_rng(1)
    b = random_matrix(F5, 4, 2, rng)
    assert solve(Matrix.identity(F5, 4), b) == b


def test_solve_free_variable_convention():
    # enumerate the 4 candidates over F_2: solutions are (1,0) and (0,1);
    # the deterministic particular solution sets the free variable to 0
    a = Matrix(F2, [[1, 1]])
    b = Matrix(F2, [[1]])
    assert solve(a, b) == Matrix(F2, [[1], [0]])


def test_solve_inconsistent():
    with pytest.raises(NoSolutionError):
        solve(Matrix.zeros(F2, 2, 2), Matrix(F2, [[1], [0]]))


def test_rank_nullity_and_kernel_random():
    rng = np.random.default_rng(7)
    for p in (2, 3, 5):
        field = PrimeField(p)
        for _ in range(50):
            rows, cols = int(rng.integers(0, 7)), int(rng.integers(0, 7))
            m = random_matrix(field, rows, cols, rng)
            k = kernel_basis(m)
            assert (m @ k).is_zero()
            assert m.rank() + k.cols == cols
            assert k.rank() == k.cols


def test_solve_random_consistency():
    rng = np.random.default_rng(8)
    for _ in range(60):
        field = PrimeField(int(rng.choice([2, 3, 5])))
        a = random_matrix(field, int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
        x0 = random_matrix(field, a.cols, 2, rng)
        b = a @ x0
        x = solve(a, b)
        assert a @ x == b
        bad = random_matrix(field, a.rows, 1, rng)
        try:
            x = solve(a, bad)
            assert a @ x == bad
        except NoSolutionError:
            aug = a.hstack(bad)
            assert aug.rank() > a.rank()


def test_rref_against_sympy():
    rng = np.random.default_rng(9)
    for _ in range(25):
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        m = random_matrix(field, int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
        dm = sympy.polys.matrices.DomainMatrix.from_Matrix(
            sympy.Matrix(m.tolist())
        ).convert_to(GF(p))
        expected_rank = len(dm.rref()[1])
        assert m.rank() == expected_rank


def test_column_space_and_left_kernel():
    rng = np.random.default_rng(10)
    for _ in range(30):
        field = PrimeField(int(rng.choice([2, 3])))
        m = random_matrix(field, int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
        c = column_space_basis(m)
        assert c.rank() == c.cols == m.rank()
        lk = left_kernel_basis(m)
        assert (lk @ m).is_zero()
        assert lk.rows == m.rows - m.rank()


def test_coordinate_solver():
    rng = np.random.default_rng(11)
    basis = Matrix(F3, [[1, 0], [1, 1], [0, 2]])
    cs = CoordinateSolver(basis)
    for _ in range(10):
        c = random_matrix(F3, 2, 1, rng)
        v = basis @ c
        assert cs.coords(v) == c
    outside = Matrix(F3, [[1], [0], [0]])
    assert not cs.contains(outside)
    with pytest.raises(NoSolutionError):
        cs.coords(outside)


def test_char_poly_nilpotent_block():
    m = Matrix(F2, [[0, 1], [0, 0]])
    assert char_poly(m) == Poly(F2, (0, 0, 1))  # x^2


def test_min_poly_identity():
    m = Matrix.identity(F5, 3)
    assert min_poly(m) == Poly(F5, (-1, 1))  # x - 1


def test_factor_x2_plus_x_f2():
    f = Poly(F2, (0, 1, 1))
    fs = factor(f)
    assert fs == [(Poly(F2, (0, 1)), 1), (Poly(F2, (1, 1)), 1)]


def test_cayley_hamilton_and_minpoly_divides():
    rng = np.random.default_rng(12)
    for _ in range(40):
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        n = int(rng.integers(1, 6))
        m = random_matrix(field, n, n, rng)
        cp = char_poly(m)
        assert cp.degree() == n and cp.is_monic()
        assert cp.eval_matrix(m).is_zero()
        mp = min_poly(m)
        assert mp.eval_matrix(m).is_zero()
        assert (cp % mp).is_zero()


def test_char_poly_against_sympy():
    rng = np.random.default_rng(13)
    for _ in range(20):
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        n = int(rng.integers(1, 6))
        m = random_matrix(field, n, n, rng)
        sm = sympy.Matrix(m.tolist())
        expected = sympy.Poly(sm.charpoly().as_expr(), sympy.Symbol("lambda"), modulus=p)
        coeffs = [int(c) % p for c in reversed(expected.all_coeffs())]
        assert list(char_poly(m).coeffs) == coeffs


def test_factor_roundtrip_random():
    rng = np.random.default_rng(14)
    for _ in range(1000):
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        deg = int(rng.integers(1, 9))
        coeffs = [int(rng.integers(0, p)) for _ in range(deg)] + [
            int(rng.integers(1, p))
        ]
        f = Poly(field, coeffs)
        fs = factor(f, seed=99)
        prod = Poly(field, (f.leading(),))
        for g, k in fs:
            assert g.is_monic()
            for _ in range(k):
                prod = prod * g
        assert prod == f


def test_factor_irreducibility_of_parts():
    # every reported factor has no root-degree split left: re-factoring a
    # factor returns itself
    rng = np.random.default_rng(15)
    for _ in range(50):
        p = int(rng.choice([2, 3]))
        field = PrimeField(p)
        coeffs = [int(rng.integers(0, p)) for _ in range(6)] + [1]
        for g, _ in factor(Poly(field, coeffs)):
            assert factor(g) == [(g, 1)]


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factor(Poly.zero(F2))


def test_poly_gcd_xgcd_lcm():
    rng = np.random.default_rng(16)
    for _ in range(60):
        p = int(rng.choice([2, 3, 5]))
        field = PrimeField(p)
        a = Poly(field, [int(rng.integers(0, p)) for _ in range(5)])
        b = Poly(field, [int(rng.integers(0, p)) for _ in range(4)])
        if a.is_zero() or b.is_zero():
            continue
        g, u, v = poly_xgcd(a, b)
        assert u * a + v * b == g
        assert (a % g).is_zero() and (b % g).is_zero()
        l = poly_lcm(a, b)
        assert (l % a).is_zero() and (l % b).is_zero()
        assert (g * l).monic() == (a * b).monic()


def test_matmul_large_prime_no_overflow():
    field = PrimeField(2147483647)
    v = field.p - 1
    a = Matrix(field, [[v, v, v]])
    b = Matrix(field, [[v], [v], [v]])
    expected = (3 * v * v) % field.p
    assert (a @ b).tolist() == [[expected]]
