import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from fermigauss import linalg
from fermigauss.errors import (
    NotAntisymmetricError,
    NotGeneralizedAntisymmetricError,
    OddDimensionError,
    SingularMatrixError,
)

from conftest import random_antisymmetric


class TestPfaffian:
    def test_two_by_two_is_entry(self):
        a = 3.0 - 2.5j
        mat = np.array([[0, a], [-a, 0]])
        assert linalg.pfaffian(mat) == pytest.approx(a)

    def test_four_by_four_closed_form(self, rng):
        # upper triangle (a, b, c, d, e, f) row-wise -> Pf = af - be + cd
        a, b, c, d, e, f = rng.normal(size=6) + 1j * rng.normal(size=6)
        mat = np.zeros((4, 4), dtype=complex)
        mat[0, 1], mat[0, 2], mat[0, 3] = a, b, c
        mat[1, 2], mat[1, 3], mat[2, 3] = d, e, f
        mat -= mat.T
        assert linalg.pfaffian(mat) == pytest.approx(a * f - b * e + c * d)

    def test_square_equals_lu_determinant(self, rng):
        mat = random_antisymmetric(rng, 6)
        det = np.linalg.det(mat)  # LU-based oracle
        assert abs(linalg.pfaffian(mat) ** 2 - det) <= 1e-9 * abs(det)

    def test_permutation_sign(self, rng):
        mat = random_antisymmetric(rng, 6)
        perm = rng.permutation(6)
        p = np.eye(6)[perm]
        assert linalg.pfaffian(p.T @ mat @ p) == pytest.approx(
            np.linalg.det(p) * linalg.pfaffian(mat))

    def test_empty_matrix_is_one(self):
        assert linalg.pfaffian(np.zeros((0, 0))) == 1.0

    def test_singular_gives_zero(self):
        assert linalg.pfaffian(np.zeros((4, 4))) == 0.0

    def test_odd_dimension_rejected(self):
        with pytest.raises(OddDimensionError):
            linalg.pfaffian(np.zeros((3, 3)))

    def test_not_antisymmetric_rejected(self):
        with pytest.raises(NotAntisymmetricError):
            linalg.pfaffian(np.eye(4))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 2**32 - 1))
    def test_square_is_determinant_property(self, half, seed):
        mat = random_antisymmetric(np.random.default_rng(seed), 2 * half)
        det = np.linalg.det(mat)
        assert abs(linalg.pfaffian(mat) ** 2 - det) <= 1e-9 * max(abs(det), 1.0)


def thermal_sigma(n):
    modes = n.shape[0]
    eye = np.eye(modes)
    return np.block([[n.T - eye, np.zeros_like(n)], [np.zeros_like(n), eye - n]])


class TestAntisymmetrize:
    def test_single_mode_pattern(self):
        # [[s, 0], [0, -s]] interleaves to [[0, s], [-s, 0]]
        s = 0.7 - 0.2j
        sig = np.array([[s, 0], [0, -s]])
        assert_allclose(linalg.antisymmetrize(sig), [[0, s], [-s, 0]], atol=0)

    def test_two_mode_thermal(self, rng):
        n = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        sig = thermal_sigma(n)
        sig_a = linalg.antisymmetrize(sig)
        assert np.abs(sig_a + sig_a.T).max() <= 1e-12
        assert np.abs(np.diag(sig_a)).max() == 0.0
        # |Pf|^2 equals |det sigma| (the permutation shifts only the sign)
        pf = linalg.pfaffian(sig_a)
        assert abs(abs(pf) ** 2 - abs(np.linalg.det(sig))) <= 1e-9

    def test_determinant_sign_rule(self, rng):
        for modes in (1, 2, 3):
            n = 0.3 * (rng.random((modes, modes)) + 1j * rng.random((modes, modes)))
            m = random_antisymmetric(rng, modes, 0.2)
            mp = random_antisymmetric(rng, modes, 0.2)
            eye = np.eye(modes)
            sig = np.block([[n.T - eye, m], [mp, eye - n]])
            sig_a = linalg.antisymmetrize(sig)
            assert np.linalg.det(sig_a) == pytest.approx(
                (-1) ** modes * np.linalg.det(sig))

    def test_rejects_plain_matrices(self):
        with pytest.raises(NotGeneralizedAntisymmetricError):
            linalg.antisymmetrize(np.eye(4))

    def test_dual_matches_inverse(self, rng):
        n = 0.3 * (rng.random((3, 3)) + 1j * rng.random((3, 3)))
        sig = thermal_sigma(n)
        lhs = linalg.antisymmetrize_dual(np.linalg.inv(sig))
        rhs = np.linalg.inv(linalg.antisymmetrize(sig))
        assert_allclose(lhs, rhs, atol=1e-12)


class TestGeneralizedAntisymmetry:
    def test_covariance_structure_passes(self, rng):
        n = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = random_antisymmetric(rng, 3)
        mp = random_antisymmetric(rng, 3)
        eye = np.eye(3)
        sig = np.block([[n.T - eye, m], [mp, eye - n]])
        assert linalg.check_generalized_antisymmetry(sig)

    def test_perturbed_entry_fails(self, rng):
        n = rng.normal(size=(2, 2))
        sig = thermal_sigma(n)
        sig[0, 1] += 1.0
        assert not linalg.check_generalized_antisymmetry(sig)

    def test_zero_matrix_passes(self):
        assert linalg.check_generalized_antisymmetry(np.zeros((4, 4)))

    def test_constant_matrices_square_to_identity(self):
        for modes in (1, 2, 3):
            eye = np.eye(2 * modes)
            assert_allclose(linalg.constant_i(modes) @ linalg.constant_i(modes), eye)
            assert_allclose(linalg.constant_x(modes) @ linalg.constant_x(modes), eye)


class TestDetInverse:
    def test_identity(self):
        assert linalg.det(np.eye(3)) == pytest.approx(1.0)
        assert_allclose(linalg.inverse(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        assert linalg.det(np.diag([2.0, 3.0])) == pytest.approx(6.0)

    def test_inverse_residual(self, rng):
        mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        inv = linalg.inverse(mat)
        assert np.abs(mat @ inv - np.eye(4)).max() <= 1e-9

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            linalg.inverse(np.diag([1.0, 0.0]))
