"""Certified bounds on the single-photon projection of light sources.

Quick start::

    >>> from sppbounds import analyze, coherent, observables
    >>> report = analyze(observables(coherent(0.3)))
    >>> report.criterion_used.value
    'VacuumBased'
"""

from .bounds import (
    Basis,
    BoundReport,
    Criterion,
    analyze,
    classify_sets,
    effective_g2_photon,
    effective_g2_vacuum,
    exact_p1_from_decomposition,
    fallback_bounds_g2_only,
    g2_threshold_for_smppr,
    multiphoton_upper_and_p0p1_lower,
    smppr_lower_photon,
    smppr_lower_vacuum,
    spp_bounds_photon,
    spp_bounds_vacuum,
    zubizarreta_lower_g2,
)
from .errors import DomainError, InsufficientData, NoSolution, NotADistribution, NotApplicable
from .families import FamilyKind, FamilySpec, coherent, fock, qd_background, random_truncated, thermal
from .fock import (
    ObservableSet,
    PhotonDistribution,
    g2_zero_delay,
    mandel_q,
    mean_photon_number,
    multi_photon_observables,
    observables,
    projections,
    vacuum_mix,
    validate,
)

__version__ = "0.1.0"
