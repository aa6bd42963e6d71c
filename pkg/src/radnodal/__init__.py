"""Radial nodal solutions of weighted superlinear elliptic problems.

Shooting solver, energy levels, hypothesis checkers and level-growth analysis
for -Δu = K(|x|) g(u) on a ball or an annulus with Dirichlet data.
"""
from .model import (
    Annulus, Ball, ConstantWeight, ExponentialWeight, Linear, PowerLawWeight, PowerSum,
    ProblemSpec, PurePower, SupercriticalWarning, delta, n_sigma, sigma, subcritical_range,
)
from .radial_ode import (
    IntegrationOptions, RadialProfile, Status, count_interior_zeros, integrate, integrate_annulus,
    integrate_ball, ode_residual,
)
from .shooting import ShootResult, bracket_k, classify, solve_k, solve_ladder, uniqueness_scan
from .energy import EnergyBreakdown, energy_direct, energy_radial, omega
from .analysis import CensusReport, ScalingFit, census, fit_exponent, lower_bound_constant
from .weight import HypothesisReport, check_condition_main, check_H1, eval_V
from .nonlinearity import GrowthReport, check_H2_H3, check_H4, check_H5, check_remark1, eval_g

__version__ = "0.1.0"
