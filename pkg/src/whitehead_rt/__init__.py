"""Quantum invariants, hyperbolic Dehn filling and saddle-point asymptotics for
surgeries W(p,q) on one component of the Whitehead link."""
from .special import (
    AccuracyError, ContourSpec, DomainError, QuantumLevel, bloch_wigner, brace, brace_factorial, dilog,
    lobachevsky, phi_N, pochhammer_t, quantum_integer,
)
from .surgery import (
    CoprimalityError, NegContinuedFraction, SurgeryCombinatorics, SurgeryPresentation, SurgerySlope, bezout,
    build_combinatorics, expand_ncf, linking_signature,
)
from .invariants import (
    InfeasibleError, InvariantSample, TVSeries, gauss_sum_S, habiro_bracket, rt_bruteforce, rt_reduced,
    turaev_viro,
)
from .geometry import (
    HyperbolicSolution, in_set_S, solve_filling, vol_bloch_wigner, vol_cs, vol_lower_bound,
)
from .asymptotics import (
    AsymptoticProfile, PotentialParams, RegionSpec, asymptotic_J, critical_x, hessian_f, potential_V,
    potential_V_N, region_membership, region_v, solve_critical, theta2_of_c, tv_asymptotic,
)

__version__ = "0.1.0"
