"""Exact Fraction-based rank and solve oracle."""

from fractions import Fraction

import numpy as np
import pytest

from alignsim.rational import exact_rank, exact_solve, to_fractions


def test_to_fractions_is_exact_deep_copy():
    rows = [[1, 2], [3, 4]]
    out = to_fractions(rows)
    out[0][0] = Fraction(9)
    assert rows[0][0] == 1
    assert all(isinstance(x, Fraction) for row in out for x in row)


def test_exact_rank_basics():
    assert exact_rank([[1, 0], [0, 1]]) == 2
    assert exact_rank([[0, 0], [0, 0]]) == 0
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[Fraction(1, 3), Fraction(2, 3)]]) == 1


def test_exact_rank_rectangular_and_product_structure():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rows = int(rng.integers(1, 8))
        cols = int(rng.integers(1, 8))
        inner = int(rng.integers(0, min(rows, cols) + 1))
        a = rng.integers(-4, 5, size=(rows, inner))
        b = rng.integers(-4, 5, size=(inner, cols))
        m = a @ b
        assert exact_rank(m.tolist()) == np.linalg.matrix_rank(m)


def test_exact_solve_round_trip():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        while True:
            a = rng.integers(-5, 6, size=(n, n))
            if np.linalg.matrix_rank(a) == n:
                break
        x_true = [Fraction(int(v), int(rng.integers(1, 5)))
                  for v in rng.integers(-9, 10, size=n)]
        rhs = [sum(Fraction(int(a[i][j])) * x_true[j] for j in range(n))
               for i in range(n)]
        assert exact_solve(a.tolist(), rhs) == x_true


def test_exact_solve_singular_raises():
    with pytest.raises(ZeroDivisionError):
        exact_solve([[1, 2], [2, 4]], [1, 1])


def test_shape_validation():
    with pytest.raises(ValueError):
        exact_rank([])
    with pytest.raises(ValueError):
        exact_rank([[1, 2], [3]])
    with pytest.raises(ValueError):
        exact_solve([[1, 2, 3]], [1])
    with pytest.raises(ValueError):
        exact_rank([[1] * 65])
