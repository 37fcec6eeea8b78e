"""twistkit: nonparaxial Bessel-mode electromagnetic fields and
atom-photon transition matrix elements with full angular-momentum
bookkeeping.

Modules
-------
specfun
    Bessel, Laguerre, Gegenbauer and hypergeometric evaluations with
    convergence tracking.
fields
    TE/TM/L/R Bessel modes: vector potential, electric and magnetic
    fields, circular-basis decompositions.
expansion
    Addition-theorem expansions of a vortex profile about a displaced
    center, with per-term breakdowns.
matrix_elements
    Center-of-mass and internal matrix elements, selection-rule
    channel tables, spin couplings, and candidate-closed-form
    comparisons.
quadrature
    Adaptive Gauss-Kronrod panels, semi-infinite oscillatory
    integration with series acceleration, finite-difference vector
    operators.
cli
    The ``twistkit`` command-line interface.
"""

from .errors import (
    ConvergenceError,
    InvalidArgumentError,
    OracleInconsistencyError,
    SingularConfigurationError,
    SingularNormalizationError,
    TwistkitError,
)
from .fields import CylPoint, FieldSample, ModeKind, ModeSpec
from .matrix_elements import (
    CenterOfMassState,
    Channel,
    ChannelAmplitude,
    DipoleCouplings,
    InternalState,
    SpinParticle,
    TermOrder,
)

__version__ = "1.0.0"

__all__ = [
    "CenterOfMassState",
    "Channel",
    "ChannelAmplitude",
    "ConvergenceError",
    "CylPoint",
    "DipoleCouplings",
    "FieldSample",
    "InternalState",
    "InvalidArgumentError",
    "ModeKind",
    "ModeSpec",
    "OracleInconsistencyError",
    "SingularConfigurationError",
    "SingularNormalizationError",
    "SpinParticle",
    "TermOrder",
    "TwistkitError",
    "__version__",
]
