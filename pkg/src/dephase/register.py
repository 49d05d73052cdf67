"""Dephasing of an L-qubit register coupled to thermal reservoirs.

Basis index ``i`` has bits ``i_n`` (bit 0 is the least significant) and
qubit ``n`` sits at ``positions[n]`` on the field axis. With the field
speed set to one, ``|x_m - x_n|`` is directly the transit time between
qubits m and n.

For an element rho_ij, let d_n = i_n - j_n. The element decays as
exp(-E_ij) with

* independent reservoirs: E_ij = hamming(i, j) * gamma(t)
* one shared reservoir:   E_ij = A sum_{m,n} d_m d_n J(|x_m - x_n|)

where J(tau) is :func:`dephase.spectral.kernel_integral`. Co-located
qubits collapse the shared law to |sum_n d_n|**2 * gamma(t).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import ReservoirSpec, kernel_integral

MAX_QUBITS = 12


class Topology(str, enum.Enum):
    SHARED = "shared"
    INDEPENDENT = "independent"


@dataclass(frozen=True, eq=False)
class RegisterState:
    """Immutable snapshot of an L-qubit density matrix and its geometry."""

    rho: np.ndarray
    positions: tuple[float, ...]
    topology: Topology = Topology.SHARED

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "positions", tuple(float(x) for x in self.positions))
        object.__setattr__(self, "topology", Topology(self.topology))
        n = len(self.positions)
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"register size must be in 1..{MAX_QUBITS}, got {n}")
        if rho.shape != (2**n, 2**n):
            raise ValueError(f"rho must be {2**n}x{2**n} for {n} qubits, got {rho.shape}")

    @property
    def n_qubits(self) -> int:
        return len(self.positions)

    def validate(self, atol: float = 1e-12, psd_tol: float = 1e-10) -> None:
        """Raise ValueError unless rho is a density matrix."""
        check_density_matrix(self.rho, atol=atol, psd_tol=psd_tol)


def check_density_matrix(rho: np.ndarray, atol: float = 1e-12, psd_tol: float = 1e-10) -> None:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"trace is {np.trace(rho)!r}, expected 1")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -psd_tol:
        raise ValueError("density matrix is not positive semidefinite")


def _bit_counts(n_qubits: int, mask: int) -> np.ndarray:
    """popcount(i & mask) for every basis index i."""
    idx = np.arange(2**n_qubits)
    bits = (idx[:, None] >> np.arange(n_qubits)) & 1
    sel = np.array([(mask >> n) & 1 for n in range(n_qubits)])
    return bits @ sel


def _clusters(positions: Sequence[float]) -> list[tuple[float, int]]:
    """Distinct coordinates with the bitmask of qubits sitting there."""
    found: dict[float, int] = {}
    for n, x in enumerate(positions):
        found[x] = found.get(x, 0) | (1 << n)
    return sorted(found.items())


class _KernelCache:
    """J(tau) at a fixed time, computed once per distinct transit time."""

    def __init__(self, spec: ReservoirSpec, t: float):
        self.spec, self.t = spec, t
        self._values: dict[float, float] = {}

    def __call__(self, tau: float) -> float:
        if tau not in self._values:
            self._values[tau] = kernel_integral(self.spec, self.t, tau)
        return self._values[tau]


def _check_topology_args(positions, t):
    if t < 0:
        raise ValueError("t must be non-negative")
    if not 1 <= len(positions) <= MAX_QUBITS:
        raise ValueError(f"register size must be in 1..{MAX_QUBITS}")


def pair_exponent(spec: ReservoirSpec, i: int, j: int, positions: Sequence[float],
                  topology: Topology | str, t: float) -> float:
    """Decay exponent of the single element rho_ij after time t."""
    _check_topology_args(positions, t)
    n = len(positions)
    if not (0 <= i < 2**n and 0 <= j < 2**n):
        raise ValueError("basis index out of range")
    d = [((i >> k) & 1) - ((j >> k) & 1) for k in range(n)]
    if Topology(topology) is Topology.INDEPENDENT:
        return sum(abs(x) for x in d) * spec.prefactor * kernel_integral(spec, t)
    kernel = _KernelCache(spec, t)
    coefs: dict[float, int] = {}
    for m in range(n):
        for k in range(n):
            if d[m] and d[k]:
                tau = abs(positions[m] - positions[k])
                coefs[tau] = coefs.get(tau, 0) + d[m] * d[k]
    value = spec.prefactor * sum(c * kernel(tau) for tau, c in sorted(coefs.items()) if c)
    return max(value, 0.0)


def gamma_pm(spec: ReservoirSpec, ts: float, sign: int | str, t: float) -> float:
    """Collective exponent of two qubits separated by transit time ``ts``.

    ``sign=+1`` is the superdecoherent |11><00| element, ``sign=-1`` the
    subdecoherent |10><01| element.
    """
    s = {"+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
    if s is None:
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    if ts < 0 or t < 0:
        raise ValueError("ts and t must be non-negative")
    single = kernel_integral(spec, t)
    if ts == 0:
        corr = single
    else:
        corr = kernel_integral(spec, t, ts)
    return max(2.0 * spec.prefactor * (single + s * corr), 0.0)


def exponent_matrix(spec: ReservoirSpec, positions: Sequence[float],
                    topology: Topology | str, t: float) -> np.ndarray:
    """E_ij for every pair of basis indices, as a real symmetric matrix."""
    _check_topology_args(positions, t)
    n = len(positions)
    dim = 2**n
    if t == 0:
        return np.zeros((dim, dim))
    if Topology(topology) is Topology.INDEPENDENT:
        idx = np.arange(dim)
        xor = idx[:, None] ^ idx[None, :]
        hamming = np.zeros_like(xor)
        for k in range(n):
            hamming += (xor >> k) & 1
        return hamming * (spec.prefactor * kernel_integral(spec, t))

    kernel = _KernelCache(spec, t)
    clusters = _clusters(positions)
    # counts[i, c] = number of set bits of i inside cluster c, so that the
    # cluster sum of d for (i, j) is counts[i, c] - counts[j, c]
    counts = np.stack([_bit_counts(n, mask) for _, mask in clusters], axis=1).astype(float)
    weights = np.array([[kernel(abs(xa - xb)) for xb, _ in clusters] for xa, _ in clusters])
    # sum_ab W_ab s_a s_b with s = counts[i] - counts[j], expanded
    cross = counts @ weights @ counts.T
    diag = np.diag(cross)
    total = (diag[:, None] + diag[None, :]) - (cross + cross.T)
    # identical cluster counts mean every s_c vanishes; keep those exactly zero
    _, label = np.unique(counts, axis=0, return_inverse=True)
    label = label.reshape(-1)
    total[label[:, None] == label[None, :]] = 0.0
    return np.maximum(spec.prefactor * total, 0.0)


def evolve(state: RegisterState, spec: ReservoirSpec, t: float) -> RegisterState:
    """Apply the dephasing map for time t; populations are untouched."""
    if t == 0:
        return state
    decay = np.exp(-exponent_matrix(spec, state.positions, state.topology, t))
    np.fill_diagonal(decay, 1.0)
    return RegisterState(state.rho * decay, state.positions, state.topology)


def worst_case_exponent(spec: ReservoirSpec, n_qubits: int, positions: Sequence[float] | None,
                        topology: Topology | str, t: float) -> float:
    """Largest E_ij over all index pairs.

    ``positions=None`` places every qubit at the origin.
    """
    if positions is None:
        positions = [0.0] * n_qubits
    if len(positions) != n_qubits:
        raise ValueError("need one position per qubit")
    _check_topology_args(positions, t)
    if t == 0:
        return 0.0
    single = kernel_integral(spec, t)
    if Topology(topology) is Topology.INDEPENDENT:
        return n_qubits * spec.prefactor * single
    clusters = _clusters(positions)
    if len(clusters) == 1:
        return n_qubits**2 * spec.prefactor * single
    # every d in {-1, 0, 1}^L is realised by some (i, j); maximise d.M.d
    kernel = _KernelCache(spec, t)
    m = np.array([[kernel(abs(a - b)) for b in positions] for a in positions])
    d = np.array(list(itertools.product((-1, 0, 1), repeat=n_qubits)), dtype=float)
    quad_form = np.einsum("ki,ij,kj->k", d, m, d)
    return max(float(spec.prefactor * quad_form.max()), 0.0)


# ---------------------------------------------------------------------------
# convenience states


def ghz_state(n_qubits: int) -> np.ndarray:
    """(|0...0> + |1...1>)(<0...0| + <1...1|) / 2."""
    dim = 2**n_qubits
    rho = np.zeros((dim, dim), dtype=complex)
    for a in (0, dim - 1):
        for b in (0, dim - 1):
            rho[a, b] = 0.5
    return rho


def plus_state(n_qubits: int) -> np.ndarray:
    """|+>^L as a density matrix: every element equals 2**-L."""
    dim = 2**n_qubits
    return np.full((dim, dim), 1.0 / dim, dtype=complex)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed density matrix of the given rank (full by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real
