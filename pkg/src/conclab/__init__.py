"""Numerical laboratory for concentration of 1-Lipschitz maps into Hadamard manifolds.

Modules: ``geometry`` (H^m, S^n, R^m), ``barycenter`` (medians, Karcher
expectation), ``bounds`` (closed-form tail and moment bounds), ``sphere_exact``
(incomplete-beta sphere measures, Artstein), ``montecarlo`` (seeded
experiments) and ``cli``.
"""
from .barycenter import (
    BarycenterResult,
    EmpiricalMeasure,
    euclidean_barycenter,
    expectation_of_map,
    karcher_barycenter,
    median,
    reduce_to_tangent,
)
from .bounds import BoundValue, ConcentrationProfile, constants, gaussian_tail_exact, thm_main_tail
from .geometry import (
    HyperbolicPoint,
    LipschitzMap,
    SpherePoint,
    TangentVector,
    exp_map,
    hyp_distance,
    log_map,
    sample_sphere,
    sphere_distance,
)
from .montecarlo import ExperimentConfig, VerificationReport, run_verification
from .sphere_exact import alpha_sphere_exact, cor41_bound, tube_complement_exact

__version__ = "0.1.0"
