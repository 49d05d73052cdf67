"""Bloch vector dephased by a classical telegraph-like random field.

Each step the field offset B_z jumps by +bstep with probability p_up, by
-bstep with probability p_down, and otherwise stays put. Because B_z is
piecewise constant the azimuthal phase is integrated exactly, so a single
realisation only ever shifts phase; coherence loss appears in the
ensemble mean.

Random streams: member ``k`` of an ensemble with master seed ``s`` draws
from ``numpy.random.Generator(PCG64)`` seeded with ``member_seed(s, k)``,
a 64-bit integer produced by ``SeedSequence(s, spawn_key=(k,))``. The
ensemble mean sums members in index order, whatever the thread count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

THREADS_ENV = "DEPHASE_THREADS"


@dataclass(frozen=True)
class StochasticFieldParams:
    b0: float = 1.0
    bstep: float | None = None  # defaults to 0.1 * b0
    p_up: float = 0.1
    p_down: float = 0.1
    dt: float = 0.01
    g: float = 1.0

    def __post_init__(self):
        if self.bstep is None:
            object.__setattr__(self, "bstep", 0.1 * self.b0)
        if not self.b0 > 0:
            raise ValueError("b0 must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.g > 0:
            raise ValueError("g must be positive")
        if not (0 <= self.p_up <= 1 and 0 <= self.p_down <= 1):
            raise ValueError("p_up and p_down must be probabilities")
        if self.p_up + self.p_down > 1:
            raise ValueError("p_up + p_down must not exceed 1")

    @property
    def omega0(self) -> float:
        return self.g * self.b0


@dataclass(frozen=True)
class BlochTrajectory:
    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    kind: str  # "member" or "ensembleMean"

    @property
    def transverse(self) -> np.ndarray:
        """|s_x + i s_y| at each time."""
        return np.hypot(self.sx, self.sy)

    def norm(self) -> np.ndarray:
        return np.sqrt(self.sx**2 + self.sy**2 + self.sz**2)


def member_seed(master_seed: int, index: int) -> int:
    """64-bit seed of ensemble member ``index``."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(seq.generate_state(1, np.uint64)[0])


def _check_bloch(s0: Sequence[float]) -> np.ndarray:
    s0 = np.asarray(s0, dtype=float)
    if s0.shape != (3,):
        raise ValueError("s0 must be a 3-vector")
    if np.linalg.norm(s0) > 1 + 1e-12:
        raise ValueError("|s0| must not exceed 1")
    return s0


def _time_grid(params: StochasticFieldParams, t_max: float) -> np.ndarray:
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    n_steps = max(1, int(round(t_max / params.dt)))
    return np.arange(n_steps + 1) * params.dt


def simulate_member(params: StochasticFieldParams, s0: Sequence[float], t_max: float,
                    seed: int) -> BlochTrajectory:
    """One realisation of the stochastic field, starting from B_z = 0."""
    s0 = _check_bloch(s0)
    times = _time_grid(params, t_max)
    rng = np.random.default_rng(seed)
    kappa = rng.random(len(times) - 1)
    jumps = np.where(kappa < params.p_up, 1.0,
                     np.where(kappa > 1.0 - params.p_down, -1.0, 0.0))
    # field held during step k is bstep * (jumps[0] + ... + jumps[k-1])
    field = np.concatenate(([0.0], np.cumsum(jumps[:-1]))) * params.bstep
    drift = np.concatenate(([0.0], np.cumsum(field))) * (params.g * params.dt)

    r = math.hypot(s0[0], s0[1])
    phase = math.atan2(s0[1], s0[0]) + params.omega0 * times + drift
    return BlochTrajectory(times, r * np.cos(phase), r * np.sin(phase),
                           np.full_like(times, s0[2]), "member")


def _thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, threads)


def simulate_ensemble(params: StochasticFieldParams, s0: Sequence[float], t_max: float,
                      n_members: int, master_seed: int,
                      threads: int | None = None) -> BlochTrajectory:
    """Pointwise mean of ``n_members`` independent realisations."""
    if n_members < 1:
        raise ValueError("n_members must be at least 1")
    seeds = [member_seed(master_seed, k) for k in range(n_members)]

    def run(seed):
        return simulate_member(params, s0, t_max, seed)

    workers = min(_thread_count(threads), n_members)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(run, seeds))
    else:
        members = [run(seed) for seed in seeds]

    sx = np.zeros_like(members[0].times)
    sy = np.zeros_like(sx)
    for m in members:  # index order fixes the rounding
        sx += m.sx
        sy += m.sy
    # s_z is never touched by the field
    sz = np.full_like(sx, members[0].sz[0])
    return BlochTrajectory(members[0].times.copy(), sx / n_members, sy / n_members,
                           sz, "ensembleMean")
