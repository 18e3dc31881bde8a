import math

import numpy as np
import pytest

from opbohr import (
    ColligationSpec,
    HarmonicSeries,
    HoloSeries,
    SubordinationWitness,
    abs_value,
    adjoint,
    check_theorem,
    compose_subordination,
    operator_norm,
    thm2_radius,
)
from opbohr.generators import (
    FamilySpec,
    derive_seed,
    gaussian_coeff_sequence,
    identity_witness,
    koebe_series,
    ordered_triples,
    random_unitary,
    sample,
)

BOUNDARY_GRID = 0.97 * np.exp(2j * math.pi * np.arange(720) / 720)


def spec_of(family, **kw):
    base = dict(family_id=family, dim=2, aux_dim=4, order=64, seed=12345)
    base.update(kw)
    return FamilySpec(**base)


class TestRandomUnitary:
    def test_scalar_is_unimodular(self):
        u = random_unitary(1, 3)
        assert abs(abs(u[0, 0]) - 1.0) <= 1e-14

    def test_unitarity(self):
        for n, seed in ((2, 0), (5, 1), (9, 2)):
            u = random_unitary(n, seed)
            assert operator_norm(adjoint(u) @ u - np.eye(n)) <= 1e-12

    def test_seed_reproducibility(self):
        assert np.array_equal(random_unitary(3, 42), random_unitary(3, 42))
        assert not np.array_equal(random_unitary(3, 42), random_unitary(3, 43))


class TestDeterminism:
    @pytest.mark.parametrize("family", [
        "schur_holo", "schur_harmonic", "commuting_harmonic", "exterior_diag",
        "exterior_colligation", "convex_diag", "starlike_diag", "subordination",
    ])
    def test_bit_identical_resample(self, family):
        a = sample(spec_of(family))
        b = sample(spec_of(family))
        if isinstance(a, HoloSeries):
            assert a.coeffs.tobytes() == b.coeffs.tobytes()
        elif isinstance(a, HarmonicSeries):
            assert a.analytic.tobytes() == b.analytic.tobytes()
            assert a.coanalytic.tobytes() == b.coanalytic.tobytes()
        elif isinstance(a, ColligationSpec):
            assert a.U.tobytes() == b.U.tobytes() and a.V.tobytes() == b.V.tobytes()
        elif isinstance(a, SubordinationWitness):
            assert a.phi.coeffs.tobytes() == b.phi.coeffs.tobytes()
            assert a.certified_bound == b.certified_bound

    def test_derive_seed_stable(self):
        assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
        assert derive_seed(7, 1, 2) != derive_seed(7, 2, 1)


class TestSchurFamilies:
    def test_blaschke_scalar(self):
        inst, aux = sample(spec_of("schur_holo", dim=1, aux_dim=1), with_aux=True)
        sup = float(operator_norm(aux["eval"](BOUNDARY_GRID)).max())
        assert sup <= 1.0 + 1e-9

    def test_unit_ball_invariant_720(self):
        for seed in (1, 2, 3):
            for family in ("schur_holo", "schur_harmonic"):
                _, aux = sample(spec_of(family, dim=3, seed=seed), with_aux=True)
                sup = float(operator_norm(aux["eval"](BOUNDARY_GRID)).max())
                assert sup <= 1.0 + 1e-9

    def test_truncation_matches_exact_inside(self):
        inst, aux = sample(spec_of("schur_holo", dim=2, seed=9), with_aux=True)
        from opbohr import evaluate_grid

        zs = 0.5 * np.exp(2j * math.pi * np.arange(16) / 16)
        err = float(np.abs(evaluate_grid(inst, zs) - aux["eval"](zs)).max())
        assert err <= 1e-12

    def test_commuting_rotations_are_normal(self):
        inst = sample(spec_of("commuting_harmonic", dim=3, seed=5))
        from opbohr import rotated_coeffs

        for mu in (0.0, 1.0, math.pi / 3):
            p = rotated_coeffs(inst, mu).coeffs
            defect = operator_norm(p @ adjoint(p) - adjoint(p) @ p)
            assert float(np.max(defect)) <= 1e-10


class TestExteriorFamilies:
    def test_diag_stays_outside_unit_ball(self):
        for seed in (1, 4):
            _, aux = sample(spec_of("exterior_diag", dim=3, seed=seed), with_aux=True)
            values = aux["eval"](BOUNDARY_GRID)
            sv_min = float(np.linalg.svd(values, compute_uv=False)[:, -1].min())
            assert sv_min >= 1.0 - 1e-9

    def test_diag_normal_at_every_point(self):
        _, aux = sample(spec_of("exterior_diag", dim=3, seed=2), with_aux=True)
        values = aux["eval"](BOUNDARY_GRID[:64])
        defect = operator_norm(values @ adjoint(values) - adjoint(values) @ values)
        assert float(np.max(defect)) <= 1e-10

    def test_diag_constant_slice(self):
        spec = spec_of("exterior_diag", dim=1, order=8,
                       params={"c_range": (math.log(2), math.log(2)),
                               "beta_range": (0.0, 0.0)})
        inst = sample(spec)
        assert inst.coeffs[0][0, 0] == pytest.approx(2.0, abs=1e-12)
        assert float(np.abs(inst.coeffs[1:]).max()) <= 1e-12
        rep = check_theorem("t2", inst, 1.0 / 3.0)
        assert rep.passed

    def test_diag_radius_precondition(self):
        inst = sample(spec_of("exterior_diag", dim=2, seed=8))
        assert thm2_radius(inst.coeffs[0]) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_colligation_v_norm_in_range(self):
        spec = spec_of("exterior_colligation", seed=3,
                       params={"v_norm_sq_range": (0.5, 0.6)})
        inst = sample(spec)
        assert 0.5 - 1e-9 <= operator_norm(inst.V) ** 2 <= 0.6 + 1e-9


class TestSubordinatedFamilies:
    def test_starlike_coefficient_growth(self):
        inst = sample(spec_of("starlike_diag", dim=3, order=128, seed=6))
        norms = operator_norm(inst.coeffs[1:])
        n = np.arange(1, 129, dtype=float)
        assert np.all(norms <= n + 1e-9)
        assert operator_norm(inst.coeffs[1] - np.eye(3)) <= 1e-12

    def test_starlike_boundary_liminf(self):
        from opbohr import boundary_distance_liminf

        _, aux = sample(spec_of("starlike_diag", dim=2, order=128, seed=7), with_aux=True)
        est = boundary_distance_liminf(aux["eval"], 0.0)
        assert est.value >= 0.25 - 1e-6

    def test_planted_koebe(self):
        spec = spec_of("starlike_diag", dim=2, order=16,
                       params={"zeta": [1.0, 1.0], "frame_identity": True})
        inst = sample(spec)
        expected = koebe_series(2, 16)
        assert float(np.abs(inst.coeffs - expected.coeffs).max()) <= 1e-12

    def test_convex_subordinated_norm_bound(self):
        # ||B_k|| <= ||A_1|| across random witnesses
        for seed in range(10):
            f = sample(spec_of("convex_diag", dim=3, order=96, seed=seed))
            a1_norm = operator_norm(f.coeffs[1])
            for wseed in range(3):
                w = sample(spec_of("subordination", order=96, seed=derive_seed(seed, wseed)))
                g = compose_subordination(f, w, 96)
                assert float(operator_norm(g.coeffs[1:]).max()) <= a1_norm + 1e-9

    def test_convex_subordinated_abs_bound(self):
        # |B_k| <= |A_1| in the Loewner order for the frame-coupled family
        f = sample(spec_of("convex_diag", dim=3, order=64, seed=11))
        w = sample(spec_of("subordination", order=64, seed=13))
        g = compose_subordination(f, w, 64)
        abs_a1 = abs_value(f.coeffs[1])
        for k in range(1, 65):
            diff = abs_a1 - abs_value(g.coeffs[k])
            assert np.linalg.eigvalsh(0.5 * (diff + adjoint(diff)))[0] >= -1e-9

    def test_witness_structure(self):
        w = sample(spec_of("subordination", order=32, seed=14))
        assert w.phi.coeffs[0] == 0
        assert w.certified_bound <= 1.0

    def test_witness_constant_contraction(self):
        w = sample(spec_of("subordination", order=8, seed=2, params={"constant": 0.6}))
        assert abs(w.phi.coeffs[1]) == pytest.approx(0.6, abs=1e-12)
        assert float(np.abs(w.phi.coeffs[2:]).max()) == 0.0
        f = koebe_series(1, 8)
        g = compose_subordination(f, w, 8)
        c = w.phi.coeffs[1]
        for n in range(1, 9):
            assert g.coeffs[n][0, 0] == pytest.approx(n * c**n, abs=1e-12)

    def test_with_witness_pairs(self):
        pair = sample(spec_of("convex_diag", params={"with_witness": True}))
        assert isinstance(pair[0], HoloSeries)
        assert isinstance(pair[1], SubordinationWitness)


class TestAdHocSources:
    def test_gaussian_sequences_mass_below_identity(self):
        for seed in (0, 5):
            seq = gaussian_coeff_sequence(3, 24, seed)
            gram = np.sum(adjoint(seq) @ seq, axis=0)
            assert np.linalg.eigvalsh(gram)[-1] <= 1.0 + 1e-12

    def test_ordered_triples(self):
        t = ordered_triples(1000, 3)
        alpha, beta, gamma = t[:, 0], t[:, 1], t[:, 2]
        assert np.all(gamma >= 0) and np.all(gamma <= alpha) and np.all(alpha <= beta)

    def test_identity_witness(self):
        w = identity_witness(8)
        assert w.phi.coeffs[1] == 1.0 and np.all(w.phi.coeffs[2:] == 0)
