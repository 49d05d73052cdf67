import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephase.encoding import (DEFAULT_MAX_LEAKAGE, DecodeLeakageError, LogicalRegister,
                              code_indices, decode, encode, fidelity, leaked_mass)
from dephase.register import (RegisterState, evolve, ghz_state, pair_exponent,
                              random_density_matrix, worst_case_exponent)
from dephase.spectral import ReservoirSpec, gamma_quadrature

SPEC = ReservoirSpec.from_eta(1, 100.0)
SPEC3 = ReservoirSpec.from_eta(3, 1.0)


def ket(index, dim):
    v = np.zeros(dim)
    v[index] = 1.0
    return v


class TestEncode:
    def test_logical_zero_is_01(self):
        reg = encode(np.diag([1.0, 0.0]), [0.0])
        expected = np.outer(ket(0b01, 4), ket(0b01, 4))
        assert np.array_equal(reg.physical.rho, expected)

    def test_maximally_mixed(self):
        reg = encode(np.eye(2) / 2, [0.0])
        expected = (np.outer(ket(0b01, 4), ket(0b01, 4)) + np.outer(ket(0b10, 4), ket(0b10, 4))) / 2
        assert np.array_equal(reg.physical.rho, expected)

    def test_superposition(self):
        reg = encode(np.full((2, 2), 0.5), [0.0])
        psi = (ket(0b01, 4) + ket(0b10, 4)) / np.sqrt(2)
        assert np.allclose(reg.physical.rho, np.outer(psi, psi), atol=1e-15)

    @pytest.mark.parametrize("n_logical", range(1, 7))
    def test_overhead_is_two_to_one(self, n_logical):
        dim = 2**n_logical
        reg = encode(np.eye(dim) / dim, [0.0] * n_logical)
        assert reg.physical.n_qubits == 2 * n_logical
        assert reg.n_logical == n_logical

    def test_pairs_share_coordinates(self):
        reg = encode(np.eye(4) / 4, [1.5, -2.0])
        assert reg.physical.positions == (1.5, 1.5, -2.0, -2.0)
        reg = encode(np.eye(4) / 4, [1.5, -2.0], pair_offset=0.1)
        assert reg.physical.positions == pytest.approx((1.5, 1.6, -2.0, -1.9))

    def test_code_indices_are_one_excitation_per_pair(self):
        for n in range(1, 5):
            idx = code_indices(n)
            assert len(set(idx)) == 2**n
            for p in idx:
                for m in range(n):
                    assert ((p >> 2 * m) & 1) + ((p >> (2 * m + 1)) & 1) == 1

    @pytest.mark.parametrize("rho", [np.diag([1.2, -0.2]), np.array([[0.5, 0.4], [0.1, 0.5]]),
                                     np.eye(2)])
    def test_invalid_rejected(self, rho):
        with pytest.raises(ValueError):
            encode(rho, [0.0])

    def test_size_mismatch_and_cap(self):
        with pytest.raises(ValueError):
            encode(np.eye(2) / 2, [0.0, 1.0])
        with pytest.raises(ValueError):
            encode(np.eye(128) / 128, [0.0] * 7)


class TestDecode:
    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(1, 3), seed=st.integers(0, 2**32 - 1))
    def test_round_trip(self, n, seed):
        rho = random_density_matrix(2**n, np.random.default_rng(seed))
        out = decode(encode(rho, [0.0] * n))
        assert np.max(np.abs(out - rho)) <= 1e-12

    def test_leakage_error_carries_mass(self):
        phys = RegisterState(np.outer(ket(0, 4), ket(0, 4)), [0.0, 0.0])
        reg = LogicalRegister(1, phys)
        assert leaked_mass(reg) == pytest.approx(1.0)
        with pytest.raises(DecodeLeakageError) as info:
            decode(reg)
        assert info.value.mass == pytest.approx(1.0)

    def test_partial_leakage_threshold(self):
        rho = np.diag([0.0, 0.5 - 1e-6, 0.5, 1e-6]).astype(complex)
        reg = LogicalRegister(1, RegisterState(rho, [0.0, 0.0]))
        with pytest.raises(DecodeLeakageError):
            decode(reg, DEFAULT_MAX_LEAKAGE)
        out = decode(reg, 1e-3)
        assert np.trace(out).real == pytest.approx(1.0)


class TestDecoherenceFree:
    @pytest.mark.parametrize("spec", [SPEC, SPEC3])
    @pytest.mark.parametrize("pairs", [[0.0, 0.0], [0.0, 5.0], [0.0, 0.3, 2.0]])
    def test_co_located_pairs_are_protected(self, spec, pairs, rng):
        n = len(pairs)
        rho = random_density_matrix(2**n, rng)
        reg = encode(rho, pairs)
        for t in (0.01, 1.0, 30.0):
            evolved = evolve(reg.physical, spec, t)
            out = decode(LogicalRegister(n, evolved))
            assert np.max(np.abs(out - rho)) <= 1e-12
            assert fidelity(rho, out) >= 1 - 1e-10

    def test_bare_register_decays_with_square_law(self):
        for n in (1, 2, 3):
            for t in (0.1, 2.0):
                g = gamma_quadrature(SPEC, t)
                bare = evolve(RegisterState(ghz_state(n), [0.0] * n), SPEC, t)
                ratio = abs(bare.rho[0, -1]) / 0.5
                assert ratio == pytest.approx(np.exp(-n * n * g), rel=1e-12)
                assert worst_case_exponent(SPEC, n, None, "shared", t) == pytest.approx(n * n * g)

    def test_protection_degrades_with_offset(self):
        t = 5.0
        values = []
        for offset in (0.0, 0.001, 0.01, 0.1, 1.0):
            reg = encode(np.full((2, 2), 0.5), [0.0], pair_offset=offset)
            values.append(pair_exponent(SPEC, 0b10, 0b01, reg.physical.positions, "shared", t))
        assert values[0] == 0.0
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_fidelity_drops_with_offset(self):
        rho = np.full((2, 2), 0.5)
        reg = encode(rho, [0.0], pair_offset=1.0)
        out = decode(LogicalRegister(1, evolve(reg.physical, SPEC, 5.0)))
        assert fidelity(rho, out) < 0.999


class TestFidelity:
    def test_identical_states(self, rng):
        rho = random_density_matrix(4, rng)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_pure_states_overlap(self):
        a = np.outer(ket(0, 2), ket(0, 2))
        b = np.full((2, 2), 0.5)
        assert fidelity(a, b) == pytest.approx(0.5, abs=1e-12)
        assert fidelity(a, np.outer(ket(1, 2), ket(1, 2))) == pytest.approx(0.0, abs=1e-12)

    def test_symmetric(self, rng):
        a, b = random_density_matrix(4, rng), random_density_matrix(4, rng, rank=2)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-10)
