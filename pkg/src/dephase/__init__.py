"""Dephasing of qubits and qubit registers coupled to a thermal bosonic reservoir."""

from .encoding import DecodeLeakageError, LogicalRegister, decode, encode, fidelity
from .register import (RegisterState, Topology, evolve, exponent_matrix, gamma_pm,
                       pair_exponent, worst_case_exponent)
from .scaling import (ScalingReport, max_register_size, required_runs, runs_vs_size,
                      success_probability)
from .semiclassical import (BlochTrajectory, StochasticFieldParams, simulate_ensemble,
                            simulate_member)
from .spectral import (DecoherenceCurve, QuadratureError, Regime, ReservoirSpec,
                       classify_regime, decoherence_curve, gamma_analytic_1d,
                       gamma_exact_3d, gamma_quadrature)
from .zeta import hurwitz_zeta2

__version__ = "0.1.0"
