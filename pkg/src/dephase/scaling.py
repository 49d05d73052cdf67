"""Error-rate boosting and the register size a decoherence time allows.

Repeating a randomized algorithm that fails with probability eps gives at
least one success with probability 1 - eps**k. If each run of a size-L
register takes tau * L**2 and succeeds only when the worst coherence
survives, eps(L) = 1 - exp(-E_worst(tau L**2)) and the runs needed blow up
faster than any polynomial.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .register import MAX_QUBITS, Topology, worst_case_exponent
from .spectral import ReservoirSpec, gamma_quadrature


class UnachievableTargetError(ValueError):
    pass


def success_probability(k: int, eps: float) -> float:
    """Probability of at least one success in k runs."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps!r}")
    return 1.0 - eps**k


def required_runs(eps: float, target_p: float) -> int:
    """Smallest k with 1 - eps**k >= target_p."""
    if not 0 < target_p < 1:
        raise ValueError(f"target_p must lie in (0, 1), got {target_p!r}")
    if eps == 1:
        raise UnachievableTargetError("eps = 1: no number of runs ever succeeds")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps!r}")
    if eps == 0:
        return 1
    k = max(1, math.ceil(math.log1p(-target_p) / math.log(eps)))
    # the log ratio can land a hair either side of an integer
    while success_probability(k, eps) < target_p:
        k += 1
    while k > 1 and success_probability(k - 1, eps) >= target_p:
        k -= 1
    return k


def log_required_runs(exponent: float, target_p: float) -> float:
    """ln of the unrounded run count when eps = 1 - exp(-exponent).

    Stays finite for exponents far beyond where eps rounds to 1.
    """
    if exponent <= 0:
        return 0.0
    survival = math.exp(-exponent)
    if survival < 1e-17:
        log_neg_log_eps = -exponent
    else:
        log_neg_log_eps = math.log(-math.log1p(-survival))
    return max(0.0, math.log(-math.log1p(-target_p)) - log_neg_log_eps)


def max_register_size(t_ratio: float) -> int:
    """Largest integer L with L**3 < t_ratio."""
    if not t_ratio > 0:
        raise ValueError("t_ratio must be positive")
    size = int(t_ratio ** (1.0 / 3.0))
    while size > 0 and size**3 >= t_ratio:
        size -= 1
    while (size + 1) ** 3 < t_ratio:
        size += 1
    return size


def _power_fit(sizes, values) -> float | None:
    """Slope of ln(value) against ln(L) over the positive values."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(sizes, values) if y > 0 and x > 0]
    if len(pts) < 2:
        return None
    xs, ys = np.array(pts).T
    return float(np.polyfit(xs, ys, 1)[0])


@dataclass
class ScalingReport:
    input_sizes: list[int]
    exponent: list[float]  # worst-case decay exponent at t = tau L^2
    epsilon: list[float]
    runs: list[int | None]  # None where the count overflows a float
    log_runs: list[float]
    l_max: int | None
    params: dict
    fits: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def runs_vs_size(spec: ReservoirSpec, topology: Topology | str, tau: float, target_p: float,
                 l_range: Sequence[int], mode: str = "closed",
                 t_ratio: float | None = None) -> ScalingReport:
    """Runs needed to reach ``target_p`` as the register grows.

    ``mode="closed"`` uses L*gamma (independent) or L**2*gamma (shared,
    co-located) directly; ``mode="exact"`` maximises the register exponent
    over all index pairs and is limited to MAX_QUBITS.
    """
    topology = Topology(topology)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    if not 0 < target_p < 1:
        raise ValueError("target_p must lie in (0, 1)")
    if mode not in ("closed", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    sizes = [int(n) for n in l_range]
    if not sizes or min(sizes) < 1:
        raise ValueError("l_range must hold positive sizes")
    if mode == "exact" and max(sizes) > MAX_QUBITS:
        raise ValueError(f"exact mode is limited to {MAX_QUBITS} qubits")

    exponents, eps, runs, log_runs = [], [], [], []
    for size in sizes:
        t = tau * size**2
        if mode == "exact":
            x = worst_case_exponent(spec, size, None, topology, t)
        else:
            power = 1 if topology is Topology.INDEPENDENT else 2
            x = size**power * gamma_quadrature(spec, t)
        exponents.append(x)
        e = -math.expm1(-x)
        eps.append(e)
        lk = log_required_runs(x, target_p)
        log_runs.append(lk)
        runs.append(required_runs(e, target_p) if e < 1 else None)

    fits = {
        "log_runs_power": _power_fit(sizes, log_runs),
        "exponent_power": _power_fit(sizes, exponents),
    }
    if len(sizes) >= 2:
        # eps = 1 - a exp(-alpha L)  <=>  exponent = alpha L - ln a
        slope, intercept = np.polyfit(sizes, exponents, 1)
        fits["alpha"] = float(slope)
        fits["amplitude"] = float(math.exp(-intercept)) if -intercept < 700 else math.inf
    params = {
        "dimension": spec.dimension, "cutoff": spec.cutoff, "temperature": spec.temperature,
        "prefactor": spec.prefactor, "topology": topology.value, "tau": tau,
        "target_p": target_p, "mode": mode, "t_ratio": t_ratio,
    }
    l_max = max_register_size(t_ratio) if t_ratio is not None else None
    return ScalingReport(sizes, exponents, eps, runs, log_runs, l_max, params, fits)
