import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matconc import (
    DomainError,
    InvalidMatrixError,
    loewner_leq,
    matrix_exp,
    matrix_from_json,
    matrix_power,
    matrix_to_json,
    op_norm,
    op_norms,
)

from helpers import (
    householder_unitary,
    random_complex,
    random_hermitian,
    real_embedding_norm,
    rng_for,
)

seeds = st.integers(0, 10**6)


class TestOpNorm:
    def test_identity(self):
        for d in (1, 2, 5, 16):
            assert op_norm(np.eye(d)) == pytest.approx(1.0, abs=1e-14)

    def test_diagonal(self):
        assert op_norm(np.diag([3.0, -4.0])) == pytest.approx(4.0, abs=1e-12)

    def test_matches_real_embedding_svd(self):
        rng = rng_for(101)
        for _ in range(50):
            m = random_complex(rng, 4)
            assert op_norm(m) == pytest.approx(real_embedding_norm(m), rel=1e-9)

    def test_larger_dims(self):
        rng = rng_for(7)
        for d in (8, 32, 64):
            m = random_complex(rng, d)
            assert op_norm(m) == pytest.approx(real_embedding_norm(m), rel=1e-10)

    def test_zero_and_scalar(self):
        assert op_norm(np.zeros((3, 3))) == 0.0
        assert op_norm(np.array([[3.0 - 4.0j]])) == pytest.approx(5.0, rel=1e-14)

    def test_near_degenerate_spectrum(self):
        m = np.diag([1.0, 1.0 - 1e-9, 1.0 - 2e-9]).astype(complex)
        assert op_norm(m) == pytest.approx(1.0, rel=1e-12)

    def test_batch_matches_scalar_calls(self):
        rng = rng_for(55)
        stack = np.stack([random_complex(rng, 3) for _ in range(20)])
        batch = op_norms(stack)
        single = [op_norm(m) for m in stack]
        np.testing.assert_allclose(batch, single, rtol=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidMatrixError):
            op_norm(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        with pytest.raises(InvalidMatrixError):
            op_norm(np.array([[np.inf + 0j]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(InvalidMatrixError):
            op_norm(np.ones((2, 3)))

    @settings(deadline=None, max_examples=30)
    @given(seeds)
    def test_submultiplicative(self, seed):
        rng = rng_for(seed)
        a = random_complex(rng, 4)
        b = random_complex(rng, 4)
        assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-9

    @settings(deadline=None, max_examples=30)
    @given(seeds)
    def test_triangle_inequality(self, seed):
        rng = rng_for(seed)
        a = random_complex(rng, 5)
        b = random_complex(rng, 5)
        assert op_norm(a + b) <= op_norm(a) + op_norm(b) + 1e-9

    @settings(deadline=None, max_examples=30)
    @given(seeds)
    def test_unitary_invariance(self, seed):
        rng = rng_for(seed)
        m = random_complex(rng, 4)
        u = householder_unitary(rng, 4)
        assert op_norm(u @ m) == pytest.approx(op_norm(m), abs=1e-9)


class TestMatrixExp:
    def test_zero(self):
        np.testing.assert_allclose(matrix_exp(np.zeros((3, 3))), np.eye(3), atol=1e-15)

    def test_nilpotent(self):
        n = np.array([[0.0, 1.0], [0.0, 0.0]])
        np.testing.assert_allclose(
            matrix_exp(n), np.array([[1.0, 1.0], [0.0, 1.0]]), atol=1e-15
        )

    def test_diagonal_matches_scalar_exp(self):
        rng = rng_for(3)
        a = rng.uniform(-2.0, 2.0, size=6)
        np.testing.assert_allclose(
            matrix_exp(np.diag(a)), np.diag(np.exp(a)), rtol=1e-13, atol=1e-14
        )

    def test_entrywise_accuracy_budget(self):
        rng = rng_for(17)
        for scale in (0.3, 1.0, 4.0):
            # Hermitian: eigh oracle is accurate, enforce the budget strictly
            h = random_hermitian(rng, 5, norm=scale)
            w, v = np.linalg.eigh(h)
            oracle = (v * np.exp(w)) @ v.conj().T
            cap = 1e-12 * np.exp(op_norm(h))
            assert np.abs(matrix_exp(h) - oracle).max() <= cap
            # non-normal: eig oracle carries its own conditioning error
            m = random_complex(rng, 5, scale=scale)
            w, v = np.linalg.eig(m)
            oracle = v @ np.diag(np.exp(w)) @ np.linalg.inv(v)
            cap = 1e-12 * np.exp(op_norm(m))
            assert np.abs(matrix_exp(m) - oracle).max() <= cap + 1e-10

    @settings(deadline=None, max_examples=20)
    @given(seeds)
    def test_conjugation_covariance(self, seed):
        rng = rng_for(seed)
        d = 4
        dvals = np.diag(rng.uniform(-1.5, 1.5, size=d)).astype(complex)
        s = np.eye(d) + 0.3 * random_complex(rng, d)
        m = s @ dvals @ np.linalg.inv(s)
        lhs = matrix_exp(m)
        rhs = s @ matrix_exp(dvals) @ np.linalg.inv(s)
        assert np.abs(lhs - rhs).max() < 1e-8

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidMatrixError):
            matrix_exp(np.array([[np.nan]]))


class TestMatrixPower:
    def test_zeroth_power(self):
        rng = rng_for(5)
        m = random_complex(rng, 3)
        np.testing.assert_array_equal(matrix_power(m, 0), np.eye(3, dtype=complex))

    def test_diagonal(self):
        assert matrix_power(np.array([[2.0]]), 5)[0, 0] == pytest.approx(32.0)

    def test_matches_naive_multiplication(self):
        rng = rng_for(9)
        m = random_complex(rng, 3, scale=0.7)
        naive = np.eye(3, dtype=complex)
        for _ in range(7):
            naive = naive @ m
        np.testing.assert_allclose(matrix_power(m, 7), naive, atol=1e-12)

    def test_rejects_negative_exponent(self):
        with pytest.raises(InvalidMatrixError):
            matrix_power(np.eye(2), -1)

    @settings(deadline=None, max_examples=30)
    @given(seeds, st.integers(0, 8), st.integers(0, 8))
    def test_exponent_additivity(self, seed, a, b):
        rng = rng_for(seed)
        m = random_complex(rng, 3, scale=0.5)
        lhs = matrix_power(m, a + b)
        rhs = matrix_power(m, a) @ matrix_power(m, b)
        assert np.abs(lhs - rhs).max() < 1e-10


class TestLoewner:
    def test_trivial_order(self):
        assert loewner_leq(np.zeros((2, 2)), np.eye(2), 0.0)
        assert not loewner_leq(np.eye(2), np.zeros((2, 2)), 0.0)

    def test_product_below_exponential(self):
        # (I + mu/n)^n <= exp(mu) for Hermitian mu, cross-checked by a
        # direct eigenvalue computation of the difference.
        rng = rng_for(23)
        for _ in range(10):
            mu = random_hermitian(rng, 4, norm=rng.uniform(0.1, 1.0))
            n = 10
            a = matrix_power(np.eye(4) + mu / n, n)
            b = matrix_exp(mu)
            assert loewner_leq(a, b, 1e-12)
            diff = b - a
            lam_min = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))[0]
            assert lam_min >= -1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            loewner_leq(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2), 1e-12)
        with pytest.raises(DomainError):
            loewner_leq(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]), 1e-12)

    def test_tolerance_is_respected(self):
        a = np.diag([1.0 + 5e-9, 1.0])
        b = np.eye(2)
        assert loewner_leq(a, b, 1e-8)
        assert not loewner_leq(a, b, 1e-12)


class TestSerialization:
    def test_round_trip(self):
        rng = rng_for(31)
        m = random_complex(rng, 3)
        obj = matrix_to_json(m)
        assert obj["d"] == 3
        assert len(obj["re"]) == 9 and len(obj["im"]) == 9
        np.testing.assert_array_equal(matrix_from_json(obj), m)

    def test_row_major_layout(self):
        m = np.array([[1.0 + 2.0j, 3.0], [4.0, 5.0 - 1.0j]])
        obj = matrix_to_json(m)
        assert obj["re"] == [1.0, 3.0, 4.0, 5.0]
        assert obj["im"] == [2.0, 0.0, 0.0, -1.0]

    def test_rejects_malformed(self):
        with pytest.raises(InvalidMatrixError):
            matrix_from_json({"d": 2, "re": [1.0], "im": [0.0]})
        with pytest.raises(InvalidMatrixError):
            matrix_from_json({"re": [1.0], "im": [0.0]})
