"""Numerical toolkit for weighted entire-function spaces on C^n.

Norms with polynomial weight order m, separated lattices, averaged
measure transforms, (p, q) embedding classification, and boundedness,
compactness and essential-norm analysis of weighted composition
operators, at desk scale for one and two complex variables.
"""

from .carleson import (
    CarlesonVerdict,
    carleson_lower_bound,
    classify_carleson,
    embedding_ratio,
    three_way_values,
    vanishing_profile,
)
from .compop import (
    AffineMap,
    CompOpVerdict,
    PolynomialMap,
    SymbolPair,
    affine_symbol,
    berezin_compop,
    classify_compop,
    direct_operator_norm,
    essential_norm_estimate,
    identity_symbol,
    linear_symbol_check,
    log_berezin_compop,
    one,
    pullback_measure,
    transform_profile,
    weight_profile,
)
from .funcspace import (
    EvaluationOverflow,
    KernelCombo,
    KernelTerm,
    Params,
    Polynomial,
    derivative_norm,
    evaluate,
    fock_sobolev_norm,
    kernel,
    log_abs,
    norm_constant,
    norm_integrand_field,
    pointwise_bound_ratio,
    polynomial,
    probe_family,
    random_polynomial,
    tail_projection,
)
from .geometry import Lattice, LatticeReport, covering_multiplicity, make_lattice, verify_lattice
from .measures import (
    AtomicMeasure,
    DensityMeasure,
    atoms_on_lattice,
    averaging_field,
    averaging_sequence,
    ball_mass,
    ball_mass_many,
    berezin_field,
    berezin_value,
    discretize,
    effective_radius,
    gaussian,
    lebesgue,
    polygrowth,
    ring,
    sequence_lp,
    total_weighted_mass,
    weighted_mass_divergent,
)
from .quadrature import (
    DivergentIntegral,
    QuadratureError,
    QuadratureScheme,
    QuasiNormError,
    ScalarField,
    integrate_gaussian,
    lp_field_norm,
    scalar_field,
    scheme_for,
    set_worker_count,
    sup_field_norm,
    truncation_radius,
)
from .scenarios import (
    CompOpScenario,
    MeasureScenario,
    composition_suite,
    expected_measure_verdict,
    measure_suite,
)

__version__ = "0.1.0"
