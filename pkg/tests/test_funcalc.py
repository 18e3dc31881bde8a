import math

import numpy as np
import pytest

from opbohr import (
    BranchCut,
    BranchCutError,
    ColligationSpec,
    ContourError,
    ContourSpec,
    ContractError,
    DomainError,
    RangeError,
    adjoint,
    auto_contour,
    colligation_log_coeff,
    exterior_realization_eval,
    herglotz_transfer,
    loewner_leq,
    log_eig_normal,
    log_riesz_dunford,
    matrix_exp,
    operator_norm,
)
from opbohr.funcalc import herglotz_transfer_grid
from opbohr.generators import random_unitary
from opbohr.series import coeffs_via_cauchy_integral


def planted_normal(seed, eigs):
    eigs = np.asarray(eigs, dtype=complex)
    w = random_unitary(eigs.size, seed)
    return w @ np.diag(eigs) @ adjoint(w)


def eig_exp_oracle(m):
    w, v = np.linalg.eig(m)
    return v @ np.diag(np.exp(w)) @ np.linalg.inv(v)


class TestMatrixExp:
    def test_zero(self):
        assert np.allclose(matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        out = matrix_exp(np.diag([1.0, 2.0]).astype(complex))
        assert np.allclose(out, np.diag([math.e, math.e**2]), rtol=1e-13)

    def test_nilpotent(self):
        out = matrix_exp(np.array([[0, 1], [0, 0]], dtype=complex))
        assert np.allclose(out, np.array([[1, 1], [0, 1]]), atol=1e-14)

    def test_matches_eigendecomposition_oracle(self):
        for seed in range(8):
            m = planted_normal(seed, np.random.default_rng(seed).uniform(-2, 2, 4))
            assert operator_norm(matrix_exp(m) - eig_exp_oracle(m)) <= 1e-10

    def test_norm_cap(self):
        with pytest.raises(RangeError):
            matrix_exp(1e6 * np.eye(2))


class TestBranchCut:
    def test_principal_matches_numpy(self):
        cut = BranchCut(math.pi)
        zs = np.array([1.0, 1j, -1j, 2.0 + 3.0j, 0.5 - 0.1j])
        assert np.allclose(cut.log(zs), np.log(zs))

    def test_rotated_cut(self):
        # with the ray along the positive reals, arguments live in (0 - 2pi, 0]
        cut = BranchCut(0.0)
        val = complex(cut.log(np.array([-1.0]))[0])
        assert val == pytest.approx(-1j * math.pi)

    def test_angle_domain(self):
        with pytest.raises(Exception):
            BranchCut(4.0)


class TestLogEigNormal:
    def test_identity(self):
        assert np.allclose(log_eig_normal(np.eye(3)), 0)

    def test_diagonal(self):
        out = log_eig_normal(np.diag([math.e, math.e**2]).astype(complex))
        assert np.allclose(out, np.diag([1.0, 2.0]), atol=1e-13)

    def test_imaginary_pair(self):
        out = log_eig_normal(np.diag([2j, -2j]))
        expected = np.diag([math.log(2) + 1j * math.pi / 2, math.log(2) - 1j * math.pi / 2])
        assert np.allclose(out, expected, atol=1e-13)

    def test_exp_roundtrip(self):
        for seed in range(6):
            m = planted_normal(seed, np.random.default_rng(seed).uniform(1.0, 10.0, 3))
            back = matrix_exp(log_eig_normal(m))
            assert operator_norm(back - m) <= 1e-10 * operator_norm(m)

    def test_spectrum_on_cut_rejected(self):
        with pytest.raises(BranchCutError):
            log_eig_normal(np.diag([-1.0, 2.0]).astype(complex))

    def test_non_normal_rejected(self):
        with pytest.raises(ContractError):
            log_eig_normal(np.array([[1, 1], [0, 1]], dtype=complex))


class TestLogRieszDunford:
    def test_diagonal_against_scalar_logs(self):
        out = log_riesz_dunford(np.diag([2.0, 3.0]).astype(complex),
                                ContourSpec(2.5, 1.0, 256))
        assert np.allclose(out, np.diag([math.log(2), math.log(3)]), atol=1e-10)

    def test_identity(self):
        out = log_riesz_dunford(np.eye(2), ContourSpec(1.0, 0.5, 64))
        assert operator_norm(out) <= 1e-12

    def test_against_eigen_oracle(self):
        rng = np.random.default_rng(0)
        for seed in range(10):
            eigs = rng.uniform(1.0, 10.0, 4)
            m = planted_normal(seed, eigs)
            center = complex(0.5 * (eigs.min() + eigs.max()))
            radius = 0.5 * (eigs.max() - eigs.min()) + 0.4 * eigs.min()
            got = log_riesz_dunford(m, ContourSpec(center, radius, 128))
            assert operator_norm(got - log_eig_normal(m)) <= 1e-8

    def test_adaptive_refinement_from_coarse_start(self):
        m = np.diag([2.0, 7.0]).astype(complex)
        got = log_riesz_dunford(m, ContourSpec(4.5, 3.5, 16))
        assert np.allclose(got, np.diag([math.log(2), math.log(7)]), atol=1e-9)

    def test_contour_must_enclose_spectrum(self):
        with pytest.raises(ContourError):
            log_riesz_dunford(np.diag([2.0, 9.0]).astype(complex), ContourSpec(2.0, 1.0, 64))

    def test_contour_must_exclude_zero(self):
        with pytest.raises(ContourError):
            log_riesz_dunford(np.diag([0.5, 1.5]).astype(complex), ContourSpec(1.0, 1.2, 64))

    def test_contour_must_avoid_cut(self):
        with pytest.raises(ContourError):
            log_riesz_dunford(np.diag([1.0 + 2j, 1.0 - 2j]), ContourSpec(1.0, 2.5, 64))

    def test_auto_contour_roundtrip(self):
        m = planted_normal(5, [2.0, 3.0, 4.0])
        got = log_riesz_dunford(m, auto_contour(m))
        assert operator_norm(got - log_eig_normal(m)) <= 1e-9

    def test_exp_log_roundtrip_through_contour(self):
        rng = np.random.default_rng(12)
        for seed in range(6):
            eigs = rng.uniform(1.0, 10.0, 3)
            m = planted_normal(seed + 100, eigs)
            center = complex(0.5 * (eigs.min() + eigs.max()))
            radius = 0.5 * (eigs.max() - eigs.min()) + 0.4 * eigs.min()
            back = matrix_exp(log_riesz_dunford(m, ContourSpec(center, radius, 128)))
            assert operator_norm(back - m) <= 1e-7 * operator_norm(m)

    def test_spectrum_hugging_contour_does_not_converge(self):
        from opbohr import NumericError

        # an eigenvalue 1.5e-7 inside the circle stalls the geometric
        # convergence of the trapezoid rule until the node cap trips
        m = np.diag([2.0, 3.0 - 1e-7]).astype(complex)
        with pytest.raises(NumericError):
            log_riesz_dunford(m, ContourSpec(2.5, 0.5 + 5e-8, 64), max_nodes=4096)


def scalar_colligation(u_phase, v_val):
    return ColligationSpec(k=1, U=np.array([[u_phase]], dtype=complex),
                           V=np.array([[v_val]], dtype=complex))


def random_colligation(seed, k=4, d=2, v_norm=1.0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    v *= v_norm / operator_norm(v)
    return ColligationSpec(k=k, U=random_unitary(k, seed), V=v)


class TestHerglotzTransfer:
    def test_zero_v(self):
        c = ColligationSpec(k=2, U=np.eye(2), V=np.zeros((2, 2)))
        for z in (0.0, 0.3 + 0.2j, -0.9):
            assert operator_norm(herglotz_transfer(c, z)) == 0.0

    def test_scalar_closed_form(self):
        cval = 0.7
        c = scalar_colligation(1.0, math.sqrt(2 * cval))
        for z in (0.0, 0.5, 0.3 - 0.4j):
            expected = cval * (1 + z) / (1 - z)
            assert herglotz_transfer(c, z)[0, 0] == pytest.approx(expected, abs=1e-13)

    def test_origin_value(self):
        c = random_colligation(7)
        at0 = herglotz_transfer(c, 0.0)
        assert np.allclose(at0, 0.5 * adjoint(c.V) @ c.V, atol=1e-14)
        assert np.linalg.eigvalsh(at0)[0] >= -1e-13

    def test_domain(self):
        with pytest.raises(DomainError):
            herglotz_transfer(random_colligation(1), 1.0)

    def test_positivity_on_grid(self):
        # real part of the realized log is PSD throughout the disk
        c = random_colligation(11, v_norm=1.4)
        rng = np.random.default_rng(0)
        zs = rng.uniform(0, 0.95, 100) * np.exp(2j * math.pi * rng.uniform(size=100))
        logs = herglotz_transfer_grid(c, zs)
        for lg in logs:
            assert np.linalg.eigvalsh(lg + adjoint(lg))[0] >= -1e-11


class TestExteriorRealization:
    def test_zero_v(self):
        c = ColligationSpec(k=2, U=np.eye(2), V=np.zeros((2, 1)))
        assert np.allclose(exterior_realization_eval(c, 0.4j), np.eye(1))

    def test_scalar_value_two(self):
        c = scalar_colligation(1.0, math.sqrt(2 * math.log(2)))
        assert exterior_realization_eval(c, 0.0)[0, 0] == pytest.approx(2.0, abs=1e-12)

    def test_origin_exp_psd(self):
        c = random_colligation(3)
        f0 = exterior_realization_eval(c, 0.0)
        assert np.linalg.eigvalsh(f0)[0] >= 1.0 - 1e-12

    def test_exterior_property_on_grid(self):
        from opbohr import abs_value

        c = random_colligation(19, v_norm=1.2)
        rng = np.random.default_rng(1)
        zs = rng.uniform(0, 0.95, 100) * np.exp(2j * math.pi * rng.uniform(size=100))
        for z in zs:
            f = exterior_realization_eval(c, complex(z))
            sv_min = np.linalg.svd(f, compute_uv=False)[-1]
            assert sv_min >= 1.0 - 1e-10
            holds, _ = loewner_leq(np.eye(f.shape[0]), abs_value(f))
            assert holds


class TestColligationLogCoeff:
    def test_identity_u(self):
        c = ColligationSpec(k=3, U=np.eye(3), V=np.ones((3, 2)) / 3.0)
        for n in (1, 2, 5):
            assert np.allclose(colligation_log_coeff(c, n), adjoint(c.V) @ c.V)

    def test_zero_v(self):
        c = ColligationSpec(k=2, U=np.eye(2), V=np.zeros((2, 2)))
        assert np.allclose(colligation_log_coeff(c, 3), 0)

    def test_scalar_phase(self):
        theta = 0.8
        c = scalar_colligation(np.exp(1j * theta), 0.9)
        for n in (1, 2, 4):
            expected = 0.81 * np.exp(1j * n * theta)
            assert colligation_log_coeff(c, n)[0, 0] == pytest.approx(expected, abs=1e-13)

    def test_n_zero_contract(self):
        with pytest.raises(ContractError):
            colligation_log_coeff(random_colligation(2), 0)

    def test_norm_bound(self):
        c = random_colligation(23, v_norm=1.3)
        for n in range(1, 10):
            assert operator_norm(colligation_log_coeff(c, n)) <= 1.3**2 + 1e-12


def test_taylor_consistency_with_cauchy_extraction():
    # series coefficients of the realized log match (1/2)V*V and V* U^n V
    c = random_colligation(31, v_norm=1.1)
    got = coeffs_via_cauchy_integral(lambda z: herglotz_transfer(c, z), 10, 0.5, 256)
    assert operator_norm(got.coeffs[0] - 0.5 * adjoint(c.V) @ c.V) <= 1e-9
    for n in range(1, 11):
        assert operator_norm(got.coeffs[n] - colligation_log_coeff(c, n)) <= 1e-9
