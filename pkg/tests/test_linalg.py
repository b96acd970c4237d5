"""Unit checks for the dense linear-algebra helpers."""

import numpy as np
import pytest

from chiralg2 import linalg
from chiralg2.errors import RankDeficientError


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def test_as_matrix_coerces_and_validates():
    m = linalg.as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.complex128
    assert m.shape == (2, 2)
    with pytest.raises(ValueError):
        linalg.as_matrix([1.0, 2.0])


def test_matmul_matches_triple_loop():
    rng = np.random.default_rng(11)
    a = random_complex(rng, 5, 4)
    b = random_complex(rng, 4, 3)
    slow = np.zeros((5, 3), dtype=np.complex128)
    for i in range(5):
        for j in range(3):
            for k in range(4):
                slow[i, j] += a[i, k] * b[k, j]
    assert np.allclose(linalg.matmul(a, b), slow, rtol=0.0, atol=1e-13)


def test_matmul_validates_inner_dimensions():
    with pytest.raises(ValueError):
        linalg.matmul(np.eye(2), np.eye(3))


def test_matmul_rejects_non_finite_products():
    bad = np.array([[np.inf, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        linalg.matmul(bad, np.eye(2))


def test_dagger_conjugate_transposes():
    rng = np.random.default_rng(12)
    a = random_complex(rng, 3, 4)
    d = linalg.dagger(a)
    assert d.shape == (4, 3)
    assert np.array_equal(d, a.conj().T)


def test_kron_mixed_product_identity():
    rng = np.random.default_rng(13)
    a, b = random_complex(rng, 2, 2), random_complex(rng, 3, 3)
    c, d = random_complex(rng, 2, 2), random_complex(rng, 3, 3)
    lhs = linalg.matmul(linalg.kron(a, b), linalg.kron(c, d))
    rhs = linalg.kron(linalg.matmul(a, c), linalg.matmul(b, d))
    assert lhs.shape == (6, 6)
    assert np.allclose(lhs, rhs, rtol=0.0, atol=1e-12)


def test_trace_sums_diagonal_and_rejects_rectangles():
    assert linalg.trace(np.diag([1.0, 2.0, 3.5])) == pytest.approx(6.5)
    with pytest.raises(ValueError):
        linalg.trace(np.ones((2, 3)))


def test_least_squares_recovers_consistent_solution():
    rng = np.random.default_rng(14)
    a = random_complex(rng, 8, 5)
    x_true = random_complex(rng, 5, 1)[:, 0]
    x = linalg.solve_least_squares(a, a @ x_true)
    assert np.allclose(x, x_true, rtol=0.0, atol=1e-10)


def test_least_squares_is_deterministic():
    rng = np.random.default_rng(15)
    a = random_complex(rng, 9, 4)
    b = random_complex(rng, 9, 1)[:, 0]
    x1 = linalg.solve_least_squares(a, b)
    x2 = linalg.solve_least_squares(a.copy(), b.copy())
    assert x1.tobytes() == x2.tobytes()


def test_least_squares_flags_rank_deficiency():
    rng = np.random.default_rng(16)
    a = random_complex(rng, 6, 4)
    a[:, 3] = a[:, 0]  # exact duplicate column
    with pytest.raises(RankDeficientError) as err:
        linalg.solve_least_squares(a, np.zeros(6, dtype=np.complex128))
    assert err.value.rank == 3
    assert err.value.cols == 4


def test_least_squares_validates_rhs():
    with pytest.raises(ValueError):
        linalg.solve_least_squares(np.eye(3), np.zeros((3, 1)))
    with pytest.raises(ValueError):
        linalg.solve_least_squares(np.eye(3), np.zeros(4))
