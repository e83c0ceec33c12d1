"""Capacities on finite sets, Sugeno integrals and Sugeno-Lorentz prenorms."""
from .capacity import (
    Capacity,
    FiniteSpace,
    PropertyReport,
    Verdict,
    collapse_null_core,
    counting_dyadic,
    from_additive,
    is_autocontinuous_above,
    is_autocontinuous_below,
    is_null_additive,
    is_subadditive,
    is_weakly_null_additive,
    minimal_relaxed_constant,
    power_transform,
    property_report,
    random_capacity,
    satisfies_pgp,
    validate_capacity,
)
from .errors import (
    CapacityError,
    CrossCheckMismatch,
    DomainError,
    InfiniteCase,
    NotNullAdditive,
    NotSeparable,
    ParseError,
    PreconditionNotMet,
    SugenoLabError,
)
from .integrals import (
    MeasurableFn,
    choquet_integral,
    distribution,
    sugeno_bruteforce,
    sugeno_integral,
)
from .prenorms import (
    PrenormParams,
    chebyshev_bound,
    comparison_bounds,
    dunford_schwartz_bruteforce,
    dunford_schwartz_prenorm,
    est_bounds,
    lorentz_choquet_quasinorm,
    lorentz_quadrature,
    phi,
    sugeno_lorentz_prenorm,
    sugeno_prenorm,
)
from .topology import (
    FnSequence,
    SeparationCertificate,
    are_equivalent,
    convergence_equivalence_check,
    converges_in_measure,
    non_closed_ball_witness,
    non_open_sphere_witness,
    prenorm_convergence,
    probe_disjointness,
    pseudometric_check,
    quotient_canonical,
    separation_radius,
    sequential_linearity_check,
)

__version__ = "0.1.0"
