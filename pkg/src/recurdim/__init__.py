"""Box-dimension bounds for graphs of recurrent fractal interpolation
functions, via restricted vertical scaling matrices and their spectral radii.
"""

__version__ = "0.1.0"

from .config import (
    AffineMap,
    ConfigError,
    MapSpec,
    RfifSpec,
    ValidationReport,
    parse_spec,
    serialize_spec,
    validate_spec,
)
from .dimension import (
    BoxCount,
    DimensionReport,
    analyze,
    box_count,
    d_star,
    dimension_bounds,
    empirical_dimension,
    k_star,
)
from .graph import (
    AddressGraph,
    Component,
    PositionMap,
    RatioError,
    build_address_graph,
    components,
    positions,
)
from .intervals import Interval
from .partition import Partition, basic_interval, build_partition, domain_interval
from .polynomials import Polynomial
from .scaling import (
    ScalingMatrix,
    SpectraSequence,
    build_matrix,
    charpoly_radius,
    is_irreducible,
    spectra_sequence,
    spectral_radius,
)
from .solver import (
    CertificateResult,
    OscillationVector,
    ResolutionError,
    SampledRfif,
    check_recursion,
    oscillation_sum,
    oscillation_vector,
    solve_rfif,
    sup_bound,
    variation_certificate,
    xi_bound,
)

__all__ = [
    "AffineMap",
    "AddressGraph",
    "BoxCount",
    "CertificateResult",
    "Component",
    "ConfigError",
    "DimensionReport",
    "Interval",
    "MapSpec",
    "OscillationVector",
    "Partition",
    "Polynomial",
    "PositionMap",
    "RatioError",
    "ResolutionError",
    "RfifSpec",
    "SampledRfif",
    "ScalingMatrix",
    "SpectraSequence",
    "ValidationReport",
    "analyze",
    "basic_interval",
    "box_count",
    "build_address_graph",
    "build_matrix",
    "build_partition",
    "charpoly_radius",
    "check_recursion",
    "components",
    "d_star",
    "dimension_bounds",
    "domain_interval",
    "empirical_dimension",
    "is_irreducible",
    "k_star",
    "oscillation_sum",
    "oscillation_vector",
    "parse_spec",
    "positions",
    "serialize_spec",
    "solve_rfif",
    "spectra_sequence",
    "spectral_radius",
    "sup_bound",
    "validate_spec",
    "variation_certificate",
    "xi_bound",
]
