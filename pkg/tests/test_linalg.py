"""Dense complex linear algebra: Kronecker products, Jacobi eigensolver, PSD roots."""

import numpy as np
import pytest

from nonherm.errors import NotHermitian, NotPSD
from nonherm.gates import PAULI_X, PAULI_Y
from nonherm.linalg import hermitian_eig, kron, psd_sqrt

# sigma_y (x) sigma_y expanded entrywise by hand
YY_EXPECTED = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


class TestKron:
    def test_identity(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_xx_antidiagonal(self):
        np.testing.assert_array_equal(kron(PAULI_X, PAULI_X), np.fliplr(np.eye(4)))

    def test_yy_hand_expanded(self):
        np.testing.assert_allclose(kron(PAULI_Y, PAULI_Y), YY_EXPECTED, atol=0)

    def test_associative_and_mixed_product(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            a, b, c, d = (random_complex(rng, 2) for _ in range(4))
            np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)
            np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


class TestHermitianEig:
    def test_already_diagonal(self):
        w, v = hermitian_eig(np.diag([1.0, 2.0]).astype(complex))
        np.testing.assert_allclose(w, [1.0, 2.0], atol=0)
        np.testing.assert_allclose(v, np.eye(2), atol=0)

    def test_pauli_x_spectrum(self):
        w, _ = hermitian_eig(PAULI_X)
        np.testing.assert_allclose(w, [-1.0, 1.0], atol=1e-14)

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_reconstruction(self, n):
        rng = np.random.default_rng(n)
        b = random_complex(rng, n)
        h = b + b.conj().T
        w, v = hermitian_eig(h)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-9
        assert np.all(np.diff(w) >= 0)

    def test_trace_and_gram_invariants(self):
        rng = np.random.default_rng(21)
        for n in (2, 4, 8):
            b = random_complex(rng, n)
            h = b + b.conj().T
            w, v = hermitian_eig(h)
            assert abs(np.sum(w) - np.trace(h).real) < 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestPsdSqrt:
    def test_identity(self):
        np.testing.assert_allclose(psd_sqrt(np.eye(4)), np.eye(4), atol=1e-12)

    def test_diagonal(self):
        np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-12)

    def test_projector_is_its_own_root(self):
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1 / np.sqrt(2)
        proj = np.outer(bell, bell.conj())
        np.testing.assert_allclose(psd_sqrt(proj), proj, atol=1e-10)

    def test_square_and_commutation(self):
        rng = np.random.default_rng(4)
        for n in (2, 4):
            b = random_complex(rng, n)
            m = b @ b.conj().T
            s = psd_sqrt(m)
            assert np.max(np.abs(s @ s - m)) < 1e-8
            assert np.max(np.abs(s @ m - m @ s)) < 1e-8

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotPSD):
            psd_sqrt(np.diag([1.0, -0.5]))
