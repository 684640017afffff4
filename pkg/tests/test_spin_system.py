import numpy as np
import pytest

from mqnmr import (
    PhysicalParams,
    SpinSystem,
    beta_from_temperature,
    build_h_dz,
    build_h_mq,
    build_iz,
    build_rho_bar,
    build_rho_eq,
)

# frozen high-precision value of exp(6)/(4 cosh^2 3)
RHO_EQ_6_TOP = 0.9950608675520052


class TestSpinSystem:
    def test_dimensions(self):
        assert SpinSystem(1).dim == 2
        assert SpinSystem(2).dim == 4
        assert SpinSystem(5).dim == 32

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            SpinSystem(0)

    def test_iz_diagonal_steps_by_one(self):
        for n in (1, 2, 3, 4):
            diag = SpinSystem(n).iz_diagonal
            assert diag[0] == n / 2
            assert diag[-1] == -n / 2
            assert set(np.round(np.diff(sorted(diag)), 12)) <= {0.0, 1.0}


class TestBuildIz:
    def test_single_spin(self):
        assert np.allclose(np.diag(build_iz(SpinSystem(1))), [0.5, -0.5])

    def test_pair(self, pair):
        iz = build_iz(pair)
        assert np.allclose(np.diag(iz), [1.0, 0.0, 0.0, -1.0])
        assert np.abs(iz - np.diag(np.diag(iz))).max() == 0

    def test_three_chain(self):
        expected = [1.5, 0.5, 0.5, -0.5, 0.5, -0.5, -0.5, -1.5]
        assert np.allclose(np.diag(build_iz(SpinSystem(3))), expected)


class TestBuildHMq:
    def test_pair_entries(self, pair):
        h = build_h_mq(pair, 2.0)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 3] = expected[3, 0] = -1.0
        assert np.abs(h - expected).max() == 0

    def test_pair_eigenvalues(self, pair):
        w = np.linalg.eigvalsh(build_h_mq(pair, 2.0))
        assert np.allclose(sorted(w), [-1.0, 0.0, 0.0, 1.0], atol=1e-14)

    def test_two_quantum_phase_behaviour(self, pair):
        # conjugation by exp(-i phi Iz) multiplies the (0,3) entry by e^{-2i phi}
        d, phi = 1.7, 0.6
        h = build_h_mq(pair, d)
        phases = np.exp(-1j * phi * pair.iz_diagonal)
        rotated = (phases[:, None] * h) * phases.conj()[None, :]
        assert abs(rotated[0, 3] - h[0, 3] * np.exp(-2j * phi)) <= 1e-15

    def test_chain_of_two_reduces_to_pair(self, pair):
        assert np.array_equal(build_h_mq(SpinSystem(2), 1.3), build_h_mq(pair, 1.3))

    def test_chain_couples_only_plus_minus_two_quanta(self):
        sys3 = SpinSystem(4)
        h = build_h_mq(sys3, 1.0)
        diag = sys3.iz_diagonal
        for i in range(sys3.dim):
            for j in range(sys3.dim):
                if abs(h[i, j]) > 0:
                    assert abs(diag[i] - diag[j]) == 2

    def test_rejects_per_bond_couplings(self, pair):
        with pytest.raises(ValueError, match="uniform"):
            build_h_mq(pair, np.array([1.0, 2.0]))

    def test_rejects_single_spin(self):
        with pytest.raises(ValueError):
            build_h_mq(SpinSystem(1), 1.0)

    def test_hermitian_and_deterministic(self):
        h1 = build_h_mq(SpinSystem(3), 0.9)
        h2 = build_h_mq(SpinSystem(3), 0.9)
        assert np.array_equal(h1, h2)
        assert np.abs(h1 - h1.conj().T).max() == 0


class TestBuildHDz:
    def test_pair_matrix(self, pair):
        h = build_h_dz(pair, 1.0)
        expected = np.diag([0.5, -0.5, -0.5, 0.5]).astype(complex)
        expected[1, 2] = expected[2, 1] = -0.5
        assert np.abs(h - expected).max() <= 1e-15

    def test_commutes_with_iz(self, pair):
        h = build_h_dz(pair, 2.4)
        iz = build_iz(pair)
        assert np.abs(h @ iz - iz @ h).max() == 0

    def test_traceless(self, pair):
        assert np.trace(build_h_dz(pair, 3.3)) == 0

    def test_rejects_chain(self):
        with pytest.raises(ValueError, match="pair"):
            build_h_dz(SpinSystem(3), 1.0)


class TestBuildRhoEq:
    def test_infinite_temperature_is_maximally_mixed(self):
        for n in (1, 2, 3):
            system = SpinSystem(n)
            assert np.allclose(build_rho_eq(system, 0.0), np.eye(2**n) / 2**n)

    def test_pair_top_entry_at_beta_six(self, pair):
        rho = build_rho_eq(pair, 6.0)
        assert rho[0, 0].real == pytest.approx(RHO_EQ_6_TOP, abs=1e-15)

    def test_pair_structure(self, pair):
        beta = 1.7
        rho = build_rho_eq(pair, beta)
        z = 4 * np.cosh(beta / 2) ** 2
        expected = np.diag([np.exp(beta), 1.0, 1.0, np.exp(-beta)]) / z
        assert np.abs(rho - expected).max() <= 1e-15

    def test_unit_trace_any_beta_any_n(self):
        for n in (1, 2, 4):
            for beta in (-3.0, 0.0, 0.3, 11.0):
                assert np.trace(build_rho_eq(SpinSystem(n), beta)).real == pytest.approx(
                    1.0, abs=1e-14
                )

    def test_beta_reversal_reverses_entries(self, pair):
        forward = np.diag(build_rho_eq(pair, 2.2)).real
        backward = np.diag(build_rho_eq(pair, -2.2)).real
        assert np.allclose(forward[::-1], backward, atol=1e-15)

    def test_rejects_non_finite_beta(self, pair):
        with pytest.raises(ValueError):
            build_rho_eq(pair, np.inf)


class TestBuildRhoBar:
    def test_pair_is_quarter_identity(self, pair):
        assert np.array_equal(build_rho_bar(pair), np.eye(4) / 4)

    def test_commutes_with_everything(self, pair):
        rho = build_rho_bar(pair)
        for op in (build_h_mq(pair, 1.0), build_iz(pair)):
            assert np.abs(rho @ op - op @ rho).max() == 0

    def test_iz_expectation_vanishes(self, pair):
        assert np.trace(build_iz(pair) @ build_rho_bar(pair)) == 0


class TestPhysicalParams:
    def test_beta_to_temperature_round_trip(self):
        params = PhysicalParams(omega0=2 * np.pi * 5e8, coupling_d=100.0, beta=6.0)
        derived = beta_from_temperature(params.omega0, params.temperature)
        assert derived == pytest.approx(6.0, rel=1e-12)

    def test_temperature_source_of_truth(self):
        params = PhysicalParams(omega0=2 * np.pi * 5e8, coupling_d=100.0, temperature=0.027)
        assert params.beta == pytest.approx(
            beta_from_temperature(2 * np.pi * 5e8, 0.027), rel=1e-14
        )

    def test_rejects_both_or_neither(self):
        with pytest.raises(ValueError, match="exactly one"):
            PhysicalParams(omega0=1.0, coupling_d=1.0, beta=1.0, temperature=1.0)
        with pytest.raises(ValueError, match="exactly one"):
            PhysicalParams(omega0=1.0, coupling_d=1.0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PhysicalParams(omega0=-1.0, coupling_d=1.0, beta=1.0)
        with pytest.raises(ValueError):
            PhysicalParams(omega0=1.0, coupling_d=1.0, beta=-2.0)
        with pytest.raises(ValueError):
            PhysicalParams(omega0=1.0, coupling_d=1.0, temperature=0.0)
