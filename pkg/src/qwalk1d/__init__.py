"""One-dimensional two-state quantum walks.

The package represents walks over a finite window of sites (with a
periodic, constant-tail or hard-edge extension), conjugates them between
four typed canonical classes, factors them into a shift and a coin,
decides whether they are Szegedy walks by solving the associated phase
congruences, and verifies each of those claims independently: by dense
matrices, by exact simulation and by certificate checking.
"""

from .angles import (
    ANGLE_TOL,
    PI,
    TWO_PI,
    ZERO,
    Angle,
    CongruenceConstraint,
    SolutionSet,
    equal_mod,
    normalize,
    residual_mod,
    solve_family,
)
from .canonical import (
    ShiftCoinFactorization,
    ShiftOp,
    SiteUnitaryFamily,
    apply_equivalence,
    factor_shift_coin,
    general_to_type,
    typed_to_general,
)
from .evolve import (
    State,
    distribution,
    is_translation_invariant,
    step,
    verify_equivalence_distributions,
)
from .model import (
    ACCEPT_TOL,
    MAG_ZERO_TOL,
    UNITARY_TOL,
    Amp,
    Coin2,
    ConstantTails,
    InvalidSpec,
    NotUnitary,
    Periodic,
    PolarCoin,
    SiteBases,
    SupportEscapedWindow,
    UnsupportedBoundary,
    WalkSpec,
    Window,
    WindowOnly,
    polar_form,
    unitary_on_window,
    validate,
)
from .szegedy import (
    NoConstrainedSites,
    SzegedyCertificate,
    VerificationReport,
    build_constraints,
    phase_slope,
    solve,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "ANGLE_TOL",
    "ACCEPT_TOL",
    "MAG_ZERO_TOL",
    "UNITARY_TOL",
    "PI",
    "TWO_PI",
    "ZERO",
    "Angle",
    "CongruenceConstraint",
    "SolutionSet",
    "equal_mod",
    "normalize",
    "residual_mod",
    "solve_family",
    "Amp",
    "Coin2",
    "PolarCoin",
    "polar_form",
    "SiteBases",
    "WalkSpec",
    "Window",
    "Periodic",
    "ConstantTails",
    "WindowOnly",
    "InvalidSpec",
    "NotUnitary",
    "UnsupportedBoundary",
    "SupportEscapedWindow",
    "validate",
    "unitary_on_window",
    "State",
    "step",
    "distribution",
    "verify_equivalence_distributions",
    "is_translation_invariant",
    "SiteUnitaryFamily",
    "ShiftOp",
    "ShiftCoinFactorization",
    "general_to_type",
    "typed_to_general",
    "apply_equivalence",
    "factor_shift_coin",
    "NoConstrainedSites",
    "SzegedyCertificate",
    "VerificationReport",
    "build_constraints",
    "solve",
    "phase_slope",
    "verify_certificate",
]
