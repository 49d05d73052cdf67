"""Pair encoding that hides logical qubits from collective dephasing.

Logical bit b of qubit m is stored in physical qubits (2m+1, 2m) as
|b, 1-b>, i.e. |0~> = |01> and |1~> = |10>. Both members of a pair share
a coordinate, so every coherence inside the code space has d-sum zero per
pair and does not couple to a shared reservoir.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .register import RegisterState, Topology, check_density_matrix

MAX_LOGICAL = 6
#: probability mass allowed outside the code space before decode refuses
DEFAULT_MAX_LEAKAGE = 1e-9


class DecodeLeakageError(ValueError):
    def __init__(self, mass: float):
        super().__init__(f"{mass:.3e} of the probability lies outside the code space")
        self.mass = mass


@dataclass(frozen=True, eq=False)
class LogicalRegister:
    n_logical: int
    physical: RegisterState


def code_indices(n_logical: int) -> np.ndarray:
    """Physical basis index of each logical basis state."""
    out = np.zeros(2**n_logical, dtype=np.int64)
    for b in range(2**n_logical):
        p = 0
        for m in range(n_logical):
            bit = (b >> m) & 1
            p |= bit << (2 * m + 1)
            p |= (1 - bit) << (2 * m)
        out[b] = p
    return out


def encode(logical_rho: np.ndarray, pair_positions: Sequence[float],
           pair_offset: float = 0.0, topology: Topology | str = Topology.SHARED) -> LogicalRegister:
    """Embed a logical density matrix into 2*l physical qubits.

    ``pair_offset`` moves the first-written qubit (2m+1) of each pair away
    from its partner; the code is only exactly protected at zero offset.
    """
    logical_rho = np.asarray(logical_rho, dtype=complex)
    n_logical = len(pair_positions)
    if not 1 <= n_logical <= MAX_LOGICAL:
        raise ValueError(f"need 1..{MAX_LOGICAL} logical qubits, got {n_logical}")
    if logical_rho.shape != (2**n_logical, 2**n_logical):
        raise ValueError("logical_rho does not match the number of pair positions")
    check_density_matrix(logical_rho)

    idx = code_indices(n_logical)
    dim = 4**n_logical
    rho = np.zeros((dim, dim), dtype=complex)
    rho[np.ix_(idx, idx)] = logical_rho
    positions = []
    for x in pair_positions:
        positions += [float(x), float(x) + pair_offset]
    return LogicalRegister(n_logical, RegisterState(rho, positions, topology))


def leaked_mass(reg: LogicalRegister) -> float:
    """Probability weight outside the code space."""
    idx = code_indices(reg.n_logical)
    inside = np.real(np.diag(reg.physical.rho)[idx]).sum()
    return float(max(0.0, 1.0 - inside))


def decode(reg: LogicalRegister, max_leakage: float = DEFAULT_MAX_LEAKAGE) -> np.ndarray:
    """Project onto the code space, renormalise and undo the encoding."""
    mass = leaked_mass(reg)
    if mass > max_leakage:
        raise DecodeLeakageError(mass)
    idx = code_indices(reg.n_logical)
    block = reg.physical.rho[np.ix_(idx, idx)]
    return block / np.trace(block).real


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    # round-off eigenvalues would otherwise contribute sqrt(1e-17) ~ 3e-9
    w = np.where(w > 1e-14 * max(w.max(), 0.0), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity, computed as the squared nuclear norm of sqrt(rho) sqrt(sigma)."""
    a = _psd_sqrt(np.asarray(rho, dtype=complex))
    b = _psd_sqrt(np.asarray(sigma, dtype=complex))
    return float(np.linalg.svd(a @ b, compute_uv=False).sum() ** 2)
