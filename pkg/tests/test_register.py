import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephase.register import (MAX_QUBITS, RegisterState, Topology, check_density_matrix, evolve,
                              exponent_matrix, gamma_pm, ghz_state, pair_exponent, plus_state,
                              random_density_matrix, worst_case_exponent)
from dephase.spectral import ReservoirSpec, gamma_quadrature, kernel_integral

SPECS = [ReservoirSpec.from_eta(1, 100.0), ReservoirSpec.from_eta(3, 1.0)]


def bits_d(i, j, n):
    return [((i >> k) & 1) - ((j >> k) & 1) for k in range(n)]


@pytest.mark.parametrize("spec", SPECS)
class TestPairExponent:
    t = 2.5

    def test_subdecoherent_pair(self, spec):
        assert pair_exponent(spec, 0b10, 0b01, [0.0, 0.0], "shared", self.t) == 0.0

    def test_superdecoherent_pair(self, spec):
        g = gamma_quadrature(spec, self.t)
        assert pair_exponent(spec, 0b11, 0b00, [0.0, 0.0], "shared", self.t) == pytest.approx(4 * g, rel=1e-12)

    def test_independent_hamming(self, spec):
        g = gamma_quadrature(spec, self.t)
        assert pair_exponent(spec, 0b1111, 0, [0, 1, 2, 3], "independent", self.t) == pytest.approx(4 * g, rel=1e-12)

    def test_symmetric(self, spec):
        pos = [0.0, 0.4, 1.3]
        for i, j in itertools.product(range(8), repeat=2):
            assert pair_exponent(spec, i, j, pos, "shared", self.t) == pytest.approx(
                pair_exponent(spec, j, i, pos, "shared", self.t), rel=1e-14, abs=1e-15)

    def test_matches_gamma_pm(self, spec):
        for ts in (0.0, 0.3, 2.0, 10.0):
            pos = [0.0, ts]
            plus = pair_exponent(spec, 0b11, 0b00, pos, "shared", self.t)
            minus = pair_exponent(spec, 0b10, 0b01, pos, "shared", self.t)
            assert plus == pytest.approx(gamma_pm(spec, ts, +1, self.t), abs=1e-9)
            assert minus == pytest.approx(gamma_pm(spec, ts, -1, self.t), abs=1e-9)

    def test_continuity_in_transit_time(self, spec):
        ts = 1e-8 / spec.cutoff
        for sign in (+1, -1):
            assert abs(gamma_pm(spec, ts, sign, self.t) - gamma_pm(spec, 0.0, sign, self.t)) < 1e-4

    def test_zero_when_indices_equal(self, spec):
        for i in range(8):
            assert pair_exponent(spec, i, i, [0, 1, 2], "shared", self.t) == 0.0


def test_pair_exponent_general_positions_against_direct_sum():
    spec = SPECS[0]
    pos = [0.0, 0.5, 2.0]
    t = 1.7
    for i, j in [(0b111, 0b000), (0b101, 0b010), (0b110, 0b011)]:
        d = bits_d(i, j, 3)
        direct = spec.prefactor * sum(d[m] * d[k] * kernel_integral(spec, t, abs(pos[m] - pos[k]))
                                      for m in range(3) for k in range(3))
        assert pair_exponent(spec, i, j, pos, "shared", t) == pytest.approx(direct, rel=1e-12)


def test_gamma_pm_limits():
    spec = ReservoirSpec.from_eta(1, 1.0)
    g = gamma_quadrature(spec, 3.0)
    assert gamma_pm(spec, 0.0, "-", 3.0) == 0.0
    assert gamma_pm(spec, 0.0, "+", 3.0) == pytest.approx(4 * g, abs=1e-12)
    big = 1e3 / spec.cutoff
    assert gamma_pm(spec, big, "+", 3.0) == pytest.approx(2 * g, rel=0.02)
    assert gamma_pm(spec, big, "-", 3.0) == pytest.approx(2 * g, rel=0.02)
    with pytest.raises(ValueError):
        gamma_pm(spec, 1.0, 0, 1.0)


@pytest.mark.parametrize("spec", SPECS)
def test_exponent_matrix_matches_pair_exponent(spec):
    pos = [0.0, 0.0, 0.7, 2.0]
    for topology in Topology:
        mat = exponent_matrix(spec, pos, topology, 1.3)
        assert np.array_equal(mat, mat.T)
        for i, j in itertools.product(range(16), repeat=2):
            assert mat[i, j] == pytest.approx(pair_exponent(spec, i, j, pos, topology, 1.3), abs=1e-12)


def test_exhaustive_laws_at_four_qubits():
    spec = SPECS[0]
    t = 4.0
    g = gamma_quadrature(spec, t)
    shared = exponent_matrix(spec, [0.0] * 4, "shared", t)
    indep = exponent_matrix(spec, [0.0, 1.0, 2.0, 3.0], "independent", t)
    for i, j in itertools.product(range(16), repeat=2):
        d = bits_d(i, j, 4)
        assert abs(shared[i, j] - sum(d) ** 2 * g) <= 1e-9
        assert abs(indep[i, j] - sum(map(abs, d)) * g) <= 1e-9


def test_encoded_coherences_vanish_with_separated_pairs():
    spec = SPECS[1]
    mat = exponent_matrix(spec, [0.0, 0.0, 3.0, 3.0], "shared", 2.0)
    code = [0b0101, 0b0110, 0b1001, 0b1010]
    assert all(mat[a, b] == 0.0 for a in code for b in code)


class TestEvolve:
    def test_identity_at_zero(self, rng):
        rho = random_density_matrix(8, rng)
        state = RegisterState(rho, [0, 0, 1], "shared")
        assert np.array_equal(evolve(state, SPECS[0], 0.0).rho, state.rho)

    def test_single_qubit_coherence(self):
        spec = SPECS[0]
        rho = np.array([[0.5, 0.5], [0.5, 0.5]])
        out = evolve(RegisterState(rho, [0.0]), spec, 2.0)
        g = gamma_quadrature(spec, 2.0)
        assert out.rho[0, 1] == pytest.approx(0.5 * np.exp(-g), rel=1e-14)
        assert out.rho[0, 0] == 0.5 and out.rho[1, 1] == 0.5

    def test_subdecoherent_state_unchanged(self):
        psi = np.array([0, 1, 1, 0]) / np.sqrt(2)
        rho = np.outer(psi, psi)
        state = RegisterState(rho, [0.0, 0.0], "shared")
        for t in (0.1, 5.0, 300.0):
            assert np.array_equal(evolve(state, SPECS[0], t).rho, state.rho)

    def test_ghz_decays_with_square_law(self):
        spec = SPECS[0]
        state = RegisterState(ghz_state(3), [0.0] * 3, "shared")
        for t in (0.05, 0.5, 2.0):
            g = gamma_quadrature(spec, t)
            assert abs(evolve(state, spec, t).rho[0, 7]) == pytest.approx(0.5 * np.exp(-9 * g), rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(1, 6), seed=st.integers(0, 2**32 - 1), t=st.floats(0.0, 50.0),
           topology=st.sampled_from(list(Topology)), dim=st.sampled_from([1, 3]))
    def test_preserves_density_matrix(self, n, seed, t, topology, dim):
        rng = np.random.default_rng(seed)
        rho = random_density_matrix(2**n, rng, rank=int(rng.integers(1, 2**n + 1)))
        positions = rng.integers(0, 3, size=n) * 0.5
        spec = ReservoirSpec.from_eta(dim, 10.0)
        out = evolve(RegisterState(rho, positions, topology), spec, t).rho
        assert abs(np.trace(out) - 1) <= 1e-12
        assert np.max(np.abs(out - out.conj().T)) <= 1e-12
        assert np.linalg.eigvalsh(out)[0] >= -1e-10

    def test_state_is_read_only(self, rng):
        state = RegisterState(random_density_matrix(2, rng), [0.0])
        with pytest.raises(ValueError):
            state.rho[0, 0] = 1.0


class TestRegisterState:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            RegisterState(np.eye(2) / 2, [0.0, 1.0])

    def test_size_cap(self):
        with pytest.raises(ValueError):
            RegisterState(np.zeros((1, 1)), [])
        assert MAX_QUBITS == 12

    def test_validate(self):
        RegisterState(plus_state(2), [0, 0]).validate()
        with pytest.raises(ValueError):
            RegisterState(np.diag([1.0, 1.0]), [0]).validate()
        with pytest.raises(ValueError):
            check_density_matrix(np.diag([1.5, -0.5]))


class TestWorstCase:
    @pytest.mark.parametrize("spec", SPECS)
    def test_laws(self, spec):
        t = 1.5
        g = gamma_quadrature(spec, t)
        assert worst_case_exponent(spec, 3, None, "shared", t) == pytest.approx(9 * g, rel=1e-12)
        assert worst_case_exponent(spec, 3, [0, 1, 2], "independent", t) == pytest.approx(3 * g, rel=1e-12)
        for top in Topology:
            assert worst_case_exponent(spec, 1, None, top, t) == pytest.approx(g, rel=1e-12)

    def test_general_positions_match_matrix_maximum(self):
        spec = SPECS[1]
        pos = [0.0, 0.3, 1.1]
        assert worst_case_exponent(spec, 3, pos, "shared", 2.0) == pytest.approx(
            exponent_matrix(spec, pos, "shared", 2.0).max(), rel=1e-12)

    def test_position_count_checked(self):
        with pytest.raises(ValueError):
            worst_case_exponent(SPECS[0], 3, [0.0], "shared", 1.0)
