"""Single-qubit decoherence exponent for a thermal bosonic reservoir.

The coupling spectrum is ``omega**n * exp(-omega / cutoff)`` with n = 1 (a
one-dimensional field) or n = 3 (three-dimensional). Coherences decay as
``exp(-gamma(t))`` with

    gamma(t) = A * int_0^inf w**(n-2) exp(-w/wc) coth(w/2T) (1 - cos wt) dw

Units: hbar = k_B = 1. Everything in this module is a pure function.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .zeta import hurwitz_zeta2

#: adaptive quadrature targets
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-10
#: a result whose combined error estimate exceeds this is a failure
QUAD_TOLERANCE = 1e-9
QUAD_LIMIT = 400
#: oscillation periods integrated directly before switching to Fourier weights
_DIRECT_PERIODS = 10


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the target tolerance."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class ReservoirSpec:
    """Thermal reservoir seen by a qubit.

    ``prefactor`` is the overall proportionality constant of gamma; 0.1
    reproduces the usual figure normalisation.
    """

    dimension: int
    cutoff: float
    temperature: float
    prefactor: float = 0.1

    def __post_init__(self):
        if self.dimension not in (1, 3):
            raise ValueError(f"dimension must be 1 or 3, got {self.dimension!r}")
        for name in ("cutoff", "temperature", "prefactor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def from_eta(cls, dimension: int, eta: float, temperature: float = 1.0,
                 prefactor: float = 0.1) -> "ReservoirSpec":
        """Build a spec from the ratio eta = cutoff / temperature."""
        return cls(dimension, eta * temperature, temperature, prefactor)

    @property
    def eta(self) -> float:
        return self.cutoff / self.temperature

    @property
    def omega_max(self) -> float:
        """Upper integration limit; the exponential tail beyond it is < 1e-16."""
        return self.cutoff * max(math.log(self.prefactor * self.cutoff**2 * 1e16),
                                 math.log(1e16))


class Regime(str, enum.Enum):
    QUIET = "quiet"
    QUANTUM = "quantum"
    THERMAL = "thermal"


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    ANALYTIC1D = "analytic1d"
    EXACT3D = "exact3d"


def classify_regime(spec: ReservoirSpec, t: float) -> Regime:
    """Decoherence regime at time t.

    quiet: t < 1/cutoff; quantum: 1/cutoff <= t < 1/T; thermal: t >= 1/T.
    With cutoff <= T the quantum band is empty.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    if t * spec.temperature >= 1.0:
        return Regime.THERMAL
    if t * spec.cutoff < 1.0:
        return Regime.QUIET
    return Regime.QUANTUM


# ---------------------------------------------------------------------------
# quadrature


def _spectral_weight(w, spec: ReservoirSpec):
    """w**(n-2) exp(-w/wc) coth(w/2T); singular at w = 0 for n = 1."""
    return w ** (spec.dimension - 2) * math.exp(-w / spec.cutoff) / math.tanh(
        w / (2.0 * spec.temperature))


def _kernel(x: float, dimension: int) -> float:
    """Spatial correlation K(w * tau): cos for 1D, spherical average for 3D."""
    if dimension == 1:
        return math.cos(x)
    if abs(x) < 1e-4:
        return 1.0 - x * x / 6.0
    return math.sin(x) / x


def _run_quad(func, a, b, **kwargs) -> tuple[float, float]:
    out = quad(func, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
               limit=kwargs.pop("limit", QUAD_LIMIT), full_output=1, **kwargs)
    value, err = out[0], out[1]
    if len(out) > 3 and not math.isfinite(err):
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] diverged: {out[3]}", err)
    return value, err


def kernel_integral(spec: ReservoirSpec, t: float, tau: float = 0.0, *,
                    limit: int = QUAD_LIMIT) -> float:
    """Integral of w**(n-2) e^{-w/wc} coth(w/2T) (1 - cos wt) K(w tau), without A.

    ``tau`` is a transit time between two qubits; ``tau = 0`` gives the
    single-qubit integral. Near w = 0 the integrand is replaced by its
    limit ``T t**2 w**(n-1)``. Beyond a few oscillation periods the
    ``1 - cos`` factor is split into Fourier-weighted pieces.
    """
    if t < 0 or tau < 0:
        raise ValueError("t and tau must be non-negative")
    if t == 0:
        return 0.0
    n = spec.dimension
    temp = spec.temperature
    w_max = spec.omega_max
    w_small = 1e-6 * min(temp, 1.0 / t)
    w_split = min(w_max, _DIRECT_PERIODS * 2.0 * math.pi / (t + tau))

    def direct(w):
        if w < w_small:
            return temp * t * t * w ** (n - 1)
        s = math.sin(0.5 * w * t)
        value = _spectral_weight(w, spec) * 2.0 * s * s
        return value * _kernel(w * tau, n) if tau > 0 else value

    total, err = _run_quad(direct, 0.0, w_split, limit=limit)

    if w_split < w_max:
        def weight(w):
            return _spectral_weight(w, spec)

        # (coefficient, weight kind, frequency) of the oscillatory pieces
        if tau == 0:
            pieces = [(1.0, None, 0.0), (-1.0, "cos", t)]
            func = weight
        elif n == 1:
            pieces = [(1.0, "cos", tau), (-0.5, "cos", t + tau), (-0.5, "cos", abs(t - tau))]
            func = weight
        elif tau * w_max <= 1.0:
            # sinc is smooth here; the 1/tau split below would amplify error
            pieces = [(1.0, None, 0.0), (-1.0, "cos", t)]

            def func(w):
                return _spectral_weight(w, spec) * _kernel(w * tau, n)
        else:
            pieces = [(1.0 / tau, "sin", tau), (-0.5 / tau, "sin", t + tau),
                      (math.copysign(0.5, t - tau) / tau, "sin", abs(t - tau))]

            def func(w):
                return _spectral_weight(w, spec) / w

        for coef, kind, freq in pieces:
            if kind is not None and freq == 0.0:
                if kind == "sin":
                    continue
                kind = None
            if kind is None:
                value, e = _run_quad(func, w_split, w_max, limit=limit)
            else:
                value, e = _run_quad(func, w_split, w_max, weight=kind, wvar=freq,
                                     limit=limit)
            total += coef * value
            err += abs(coef) * e

    if err > QUAD_TOLERANCE * (1.0 + abs(total)):
        raise QuadratureError(f"kernel integral at t={t:g}, tau={tau:g} did not converge",
                              err)
    return total


def gamma_quadrature(spec: ReservoirSpec, t: float, *, limit: int = QUAD_LIMIT) -> float:
    """Decoherence exponent by adaptive numerical quadrature."""
    return spec.prefactor * kernel_integral(spec, t, 0.0, limit=limit)


# ---------------------------------------------------------------------------
# closed forms


def _log_sinhc(x: float) -> float:
    """ln(sinh(x) / x), overflow-safe."""
    if x < 1e-4:
        x2 = x * x
        return x2 / 6.0 - x2 * x2 / 180.0
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0 * x)


def gamma_analytic_1d(spec: ReservoirSpec, t: float) -> float:
    """Low-temperature closed form for the 1D field.

    A * [ln(1 + wc^2 t^2) / 2 + ln(sinh(pi T t) / (pi T t))]. The first term
    is the vacuum contribution, the second the thermal one. Accurate when
    cutoff >> T.
    """
    if spec.dimension != 1:
        raise ValueError("gamma_analytic_1d needs a one-dimensional reservoir")
    if t < 0:
        raise ValueError("t must be non-negative")
    wt = spec.cutoff * t
    return spec.prefactor * (0.5 * math.log1p(wt * wt)
                             + _log_sinhc(math.pi * spec.temperature * t))


#: bound on the imaginary residue of the conjugate zeta pair, relative to its scale
IMAG_TOLERANCE = 1e-9


def gamma_exact_3d(spec: ReservoirSpec, t: float) -> float:
    """Exact 3D exponent in terms of the Hurwitz zeta function zeta(2, q)."""
    if spec.dimension != 3:
        raise ValueError("gamma_exact_3d needs a three-dimensional reservoir")
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return 0.0
    temp, wc = spec.temperature, spec.cutoff
    q0 = temp / wc
    z0 = hurwitz_zeta2(q0)
    zp = hurwitz_zeta2(complex(q0, q0 * wc * t))
    zm = hurwitz_zeta2(complex(q0, -q0 * wc * t))
    thermal = temp * temp * (2.0 * z0 - zp - zm)
    scale = temp * temp * (2.0 * abs(z0) + abs(zp) + abs(zm))
    if abs(thermal.imag) > IMAG_TOLERANCE * scale:
        raise ArithmeticError(f"conjugate zeta terms left imaginary part {thermal.imag:.3e}")
    x2 = (wc * t) ** 2
    # (1 + ix)^-2 + (1 - ix)^-2 - 2, halved
    vacuum = wc * wc * ((1.0 - x2) / (1.0 + x2) ** 2 - 1.0)
    return spec.prefactor * (thermal.real + vacuum)


def gamma_closed_form(spec: ReservoirSpec, t: float) -> float:
    """The closed form matching the spec's dimension."""
    if spec.dimension == 1:
        return gamma_analytic_1d(spec, t)
    return gamma_exact_3d(spec, t)


def gamma(spec: ReservoirSpec, t: float, method: Method | str = Method.QUADRATURE) -> float:
    method = Method(method)
    if method is Method.QUADRATURE:
        return gamma_quadrature(spec, t)
    if method is Method.ANALYTIC1D:
        return gamma_analytic_1d(spec, t)
    return gamma_exact_3d(spec, t)


@dataclass(frozen=True)
class DecoherenceCurve:
    times: tuple[float, ...]
    gamma: tuple[float, ...]
    spec: ReservoirSpec
    method: Method
    regimes: tuple[Regime | None, ...] = field(default=())


def decoherence_curve(spec: ReservoirSpec, times: Sequence[float],
                      method: Method | str = Method.QUADRATURE) -> DecoherenceCurve:
    """Sample gamma on a time grid, annotating each point with its regime."""
    method = Method(method)
    ts = tuple(float(t) for t in times)
    if any(b < a for a, b in zip(ts, ts[1:])) or (ts and ts[0] < 0):
        raise ValueError("times must be non-negative and ordered")
    values = tuple(gamma(spec, t, method) for t in ts)
    regimes = tuple(classify_regime(spec, t) if t > 0 else None for t in ts)
    return DecoherenceCurve(ts, values, spec, method, regimes)


def log_spaced_times(start: float, stop: float, num: int) -> np.ndarray:
    return np.logspace(math.log10(start), math.log10(stop), num)
