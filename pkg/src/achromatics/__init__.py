"""Two dispersion laws, the glass/water compound objective, and an exact ray tracer."""

from .errors import (
    AfocalOrConjugateAtInfinity,
    DegeneracyViolation,
    DegenerateLaw,
    DegenerateReference,
    MissingLineData,
    NotApplicable,
    OpticsError,
    OutOfDomain,
    PrescriptionError,
    RayTraceError,
)
from .media import (
    ChainSpec,
    DispersionLaw,
    OpticalMedium,
    RefractionPair,
    SpectralLine,
    chain_media,
    derive_line_ratio_linear,
    derive_line_ratio_power,
    euler_ratio_gap,
    line_ratio,
    reference_glass,
    reference_water,
)
from .paraxial import (
    INFINITY,
    CompoundObjective,
    ImagingQuery,
    ParaxialSurface,
    aggregates,
    chromatic_focal_shift,
    euler_focal_distance,
    paraxial_trace,
    system_power,
)
from .achromat import (
    AchromatSolution,
    AchromatTarget,
    achromatic_residual,
    dollond_degeneracy_check,
    interior_curvature_report,
    solve_achromat,
)
from .raytrace import (
    MeridionalRay,
    Prescription,
    Surface,
    TraceOutcome,
    aberration_scan,
    intersect_sphere,
    paraxial_limit_check,
    refract,
    trace_ray,
)

__version__ = "0.1.0"
