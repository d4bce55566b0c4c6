import numpy as np
import pytest
from scipy.linalg import eigvalsh
from scipy.optimize import brentq
from scipy.special import gamma

from bsgauss.basis import BasisConfig
from bsgauss.errors import InvalidSpectralParameter, NoBoundState
from bsgauss.heat import delta_trace_heat
from bsgauss.spectral import (DEFAULT_SPECTRAL_CONFIG, DiscretizedOperator, Kind, all_eigenvalues,
                              assemble_bs_matrix, bound_states, det2_root, fredholm_det2,
                              fredholm_det2_detail, halfline_basis, oracle_ground_state, parse_kind,
                              top_eigenvalues)

SMALL = BasisConfig(16, 32)
# ground-state energies at lambda = 1, from the direct-diagonalization oracle
GAUSSIAN_GROUND = 0.1927057464401
DELTA_GROUND = -0.5292746884629


def one_dim_delta_energy(g):
    # -1/2 d^2 + x^2/2 - g delta(x): g G_E(0, 0) = 1 with G_E(0, 0) = Gamma(1/4 - E/2) / (2 Gamma(3/4 - E/2))
    return brentq(lambda E: g * 0.5 * gamma(0.25 - E / 2) / gamma(0.75 - E / 2) - 1.0, -5.0, 0.4999,
                  xtol=1e-15)


class TestKinds:
    @pytest.mark.parametrize("text,expected", [("gaussian", Kind("gaussian")), ("delta", Kind("delta")),
                                               ("scaled(8)", Kind("scaled", 8)),
                                               ("scaled:3", Kind("scaled", 3)),
                                               (("scaled", 5), Kind("scaled", 5))])
    def test_parse(self, text, expected):
        assert parse_kind(text) == expected

    @pytest.mark.parametrize("bad", ["square", "scaled(0)"])
    def test_rejects_unknown(self, bad):
        with pytest.raises(ValueError):
            parse_kind(bad)


class TestAssembly:
    @pytest.mark.parametrize("kind", ["gaussian", "delta", "scaled(4)"])
    def test_symmetric_positive_and_sized(self, kind):
        op = assemble_bs_matrix(-1.0, SMALL, kind)
        m = op.matrix
        assert np.max(np.abs(m - m.T)) <= 1e-12 * np.max(np.abs(m))
        assert all_eigenvalues(op).min() >= -1e-10
        size = SMALL.n_modes ** 2 if parse_kind(kind).two_dimensional else SMALL.n_modes
        assert m.shape == (size, size)

    def test_rejects_energy_above_threshold(self):
        with pytest.raises(InvalidSpectralParameter):
            assemble_bs_matrix(0.5, SMALL)

    def test_rejects_asymmetric_matrix(self):
        op = assemble_bs_matrix(-1.0, SMALL, "delta")
        bad = op.matrix.copy()
        bad[0, 1] += 1.0
        with pytest.raises(ValueError):
            DiscretizedOperator(bad, op.y_nodes, op.y_weights, op.x_modes, op.y_modes, op.E,
                                op.kind, op.sectors)

    def test_parity_sectors_cover_spectrum(self):
        op = assemble_bs_matrix(-1.0, SMALL)
        full = np.sort(eigvalsh(op.matrix))[::-1]
        np.testing.assert_allclose(all_eigenvalues(op), full, atol=1e-13)

    def test_two_routes_give_same_spectrum(self):
        cfg = BasisConfig(24, 48)
        modes = top_eigenvalues(assemble_bs_matrix(-1.0, cfg, "gaussian"), 3)
        heat = top_eigenvalues(assemble_bs_matrix(-1.0, cfg, "scaled(1)"), 3)
        assert abs(modes[0] - heat[0]) < 1e-6
        np.testing.assert_allclose(modes, heat, rtol=1e-5)

    def test_delta_frobenius_increases_toward_trace(self):
        # the Galerkin truncation converges slowly from below (about N^-1/2)
        vals = [np.sum(all_eigenvalues(assemble_bs_matrix(-1.0, BasisConfig(n, 2 * n), "delta")) ** 2)
                for n in (16, 32, 48)]
        assert np.all(np.diff(vals) > 0)
        assert vals[-1] < delta_trace_heat(-1.0)


class TestEigenvalues:
    def test_descending_and_positive(self):
        mu = top_eigenvalues(assemble_bs_matrix(-1.0, SMALL), 6)
        assert np.all(np.diff(mu) <= 0)
        assert np.all(mu >= 0)

    def test_increasing_in_energy(self):
        mu = [top_eigenvalues(assemble_bs_matrix(E), 1)[0] for E in (-5.0, -2.0, -1.0, 0.0)]
        assert np.all(np.diff(mu) > 0)

    def test_stable_under_refinement(self):
        a = top_eigenvalues(assemble_bs_matrix(-1.0, BasisConfig(32, 64)), 1)[0]
        b = top_eigenvalues(assemble_bs_matrix(-1.0, BasisConfig(32, 128)), 1)[0]
        c = top_eigenvalues(assemble_bs_matrix(-1.0, BasisConfig(48, 96)), 1)[0]
        assert abs(a - b) < 1e-6
        assert abs(a - c) < 1e-6

    def test_refinement_differences_shrink(self):
        mu = [top_eigenvalues(assemble_bs_matrix(-1.0, BasisConfig(n, 2 * n), "delta"), 1)[0]
              for n in (8, 16, 32)]
        assert abs(mu[2] - mu[1]) < abs(mu[1] - mu[0])

    def test_rejects_k_out_of_range(self):
        op = assemble_bs_matrix(-1.0, SMALL, "delta")
        with pytest.raises(ValueError):
            top_eigenvalues(op, SMALL.n_modes + 1)


class TestBoundStates:
    def test_gaussian_ground_state(self):
        r = bound_states(1.0)[0]
        assert r.energy == pytest.approx(GAUSSIAN_GROUND, abs=1e-9)
        assert r.principle_residual < 1e-10
        assert abs(r.det2_value) < 1e-10
        assert r.eigen_index == 0

    def test_delta_ground_state(self):
        r = bound_states(1.0, DEFAULT_SPECTRAL_CONFIG, "delta")[0]
        assert r.energy == pytest.approx(DELTA_GROUND, abs=1e-3)

    def test_delta_ground_state_converges(self):
        coarse = bound_states(1.0, DEFAULT_SPECTRAL_CONFIG, "delta")[0].energy
        fine = bound_states(1.0, BasisConfig(48, 96), "delta")[0].energy
        assert abs(fine - DELTA_GROUND) < abs(coarse - DELTA_GROUND)
        assert fine == pytest.approx(DELTA_GROUND, abs=1e-7)

    def test_weak_coupling_still_binds(self):
        r = bound_states(0.1)[0]
        assert r.energy < 0.5

    def test_decreasing_in_coupling(self):
        e = [bound_states(lam)[0].energy for lam in (0.5, 1.0, 2.0)]
        assert np.all(np.diff(e) < 0)

    def test_second_delta_branch(self):
        found = bound_states(1.0, DEFAULT_SPECTRAL_CONFIG, "delta", k=2)
        assert [r.eigen_index for r in found] == [0, 1]
        assert found[0].energy < found[1].energy < 0.5

    def test_no_bound_state_in_window(self):
        with pytest.raises(NoBoundState):
            bound_states(0.01, ceil_gap=0.1)

    def test_rejects_nonpositive_coupling(self):
        with pytest.raises(ValueError):
            bound_states(0.0)


class TestDet2:
    def test_zero_coupling(self):
        op = assemble_bs_matrix(-1.0, SMALL)
        assert fredholm_det2(0.0, -1.0, op) == 1.0

    def test_sign_change_at_bound_state(self):
        r = bound_states(1.0)[0]
        root = det2_root(1.0, DEFAULT_SPECTRAL_CONFIG, "gaussian", r.energy - 0.01, r.energy + 0.01)
        assert abs(root - r.energy) < 1e-6

    def test_positive_far_below(self):
        E = -5.0
        assert fredholm_det2(1.0, E, assemble_bs_matrix(E)) > 0

    def test_tail_bound_reported(self):
        d = fredholm_det2_detail(1.0, -1.0, assemble_bs_matrix(-1.0, SMALL), cutoff=1e-3)
        assert d.tail_bound > 0
        full = fredholm_det2_detail(1.0, -1.0, assemble_bs_matrix(-1.0, SMALL), cutoff=0.0)
        assert abs(d.log_abs - full.log_abs) <= d.tail_bound

    def test_rejects_mismatched_energy(self):
        with pytest.raises(ValueError):
            fredholm_det2(1.0, -2.0, assemble_bs_matrix(-1.0, SMALL))


class TestOracle:
    def test_gaussian(self):
        o = oracle_ground_state(1.0)
        assert o.converged
        assert o.rayleigh_residual < 1e-8
        assert o.ground_energy == pytest.approx(GAUSSIAN_GROUND, abs=1e-9)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_agrees_with_bs_principle(self, lam):
        e_bs = bound_states(lam)[0].energy
        e_or = oracle_ground_state(lam).ground_energy
        assert abs(e_bs - e_or) <= 1e-3 * max(1.0, abs(e_bs))

    def test_weak_coupling_approaches_threshold(self):
        assert 0.5 - oracle_ground_state(0.01).ground_energy < 1e-3

    def test_halfline_basis_reproduces_one_dim_delta(self):
        h, c0 = halfline_basis(40)
        e = eigvalsh(h - 0.5 * np.outer(c0, c0))[0]
        assert e == pytest.approx(one_dim_delta_energy(1.0), abs=1e-12)
        assert e == pytest.approx(-0.342418946781289, abs=1e-12)

    def test_delta(self):
        o = oracle_ground_state(1.0, "delta")
        assert o.converged
        assert o.ground_energy == pytest.approx(DELTA_GROUND, abs=1e-9)

    def test_scaled_moves_toward_delta(self):
        e = [oracle_ground_state(1.0, ("scaled", n)).ground_energy for n in (1, 2)]
        gaps = [abs(v - DELTA_GROUND) for v in e]
        assert gaps[1] < gaps[0]
