"""Surface functionals on finite label partitions: exact interface geometry,
lifting-measure identities, and convergence experiments."""

from .errors import (
    CaccioppoliError,
    ContractError,
    DomainError,
    FormatError,
    GeneratorError,
    StructuralError,
)
from .functional import (
    SurfaceIntegrand,
    check_symmetry,
    evaluate_functional,
    make_integrand,
)
from .quadrature import QuadratureSpec
from .harness import (
    ConvergenceReport,
    SequenceFamily,
    make_family,
    run_convergence_experiment,
)
from .io import load_partition, save_partition
from .labels import (
    CutoffProfile,
    EmbeddedSegment,
    LabelSet,
    embedded_surface_density,
)
from .lifting import (
    LiftingMeasure,
    cutoff_fiber_integral,
    fiber_identity_check,
    polar_identity_check,
    polynomial_battery,
    weakstar_probe,
)
from .partitions import (
    JumpFacet,
    Partition1D,
    Partition2D,
    embed_partition,
    jump_set,
    l1_distance,
    perimeter,
    reduced_boundary_measure,
    total_variation,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CaccioppoliError",
    "ContractError",
    "ConvergenceReport",
    "CutoffProfile",
    "DomainError",
    "EmbeddedSegment",
    "FormatError",
    "GeneratorError",
    "JumpFacet",
    "LabelSet",
    "LiftingMeasure",
    "Partition1D",
    "Partition2D",
    "QuadratureSpec",
    "SequenceFamily",
    "StructuralError",
    "SurfaceIntegrand",
    "check_symmetry",
    "cutoff_fiber_integral",
    "embed_partition",
    "embedded_surface_density",
    "evaluate_functional",
    "fiber_identity_check",
    "jump_set",
    "l1_distance",
    "load_partition",
    "make_family",
    "make_integrand",
    "perimeter",
    "polar_identity_check",
    "polynomial_battery",
    "reduced_boundary_measure",
    "run_convergence_experiment",
    "save_partition",
    "total_variation",
    "validate",
    "weakstar_probe",
]
