"""Exact minimality decisions for time maps of suspension flows, with
numerical cross-checks."""

from .basesys import (
    CircleRotation,
    DeclaredSystem,
    Denjoy,
    Furstenberg,
    Odometer,
    OdometerState,
    Point,
    TorusTranslation,
)
from .functions import CohomologousToConstant, Constant, CylinderLocallyConstant, DeclaredFunction, TrigPoly
from .qlinear import (
    ExactReal,
    FgSubgroup,
    GeneratorBasis,
    QSubspace,
    decimal_generator,
    opaque_generator,
    reciprocal,
    sqrt_generator,
)
from .spectra import (
    clopen_realization,
    decide_time,
    decide_time_map,
    lambdaK_trace_image,
    rieffel_decomposition,
    schwartzman_positive,
    suspension_eigen_group,
)
from .suspension import SuspensionFlow, SuspensionPoint, cocycle_alpha, flow, time_map
from .verdicts import Certificate, Minimal, NotMinimal, Unknown

__version__ = "0.1.0"
