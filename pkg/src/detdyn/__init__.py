"""detdyn: determinant and log-determinant dynamics under rank-one
updates, with adjugate-based identities that survive singular matrices,
a Drazin-inverse/pseudodeterminant extension of the matrix determinant
lemma, spectral shift and stability tests, and control/estimation
applications (covariance accounting, information filtering, Gramian
growth, reachable ellipsoids)."""

from .errors import (
    AllCoefficientsBelowTolerance,
    BaseNotHurwitz,
    CompatibilityViolated,
    ContourTooCoarse,
    DetDynError,
    DimensionMismatch,
    EigenvalueOnContour,
    HypothesisViolation,
    IndexGreaterThanOne,
    InputError,
    IntermediateSingular,
    NonPositiveDeterminant,
    NonSquare,
    NonSymmetricUpdate,
    NotConverged,
    NotPositiveDefinite,
    NotPSD,
    NotTwoDimensional,
    NullityMismatch,
    ParseError,
    RaggedRows,
    ResolventSingular,
    RootFindDivergence,
    ScheduleTooShort,
    Singular,
)
from .kernel import (
    CharPoly,
    DEFAULT_TOL,
    Spectrum,
    Tolerance,
    adjugate,
    charpoly,
    det,
    eigenvalues,
    full_rank_factorization,
    inverse,
    rank,
    solve,
)
from .updates import (
    ContributionStep,
    DetTrace,
    LogDetTrace,
    RankOneUpdate,
    UpdateSequence,
    contribution_analysis,
    det_product,
    det_rank_one,
    det_sequence,
    logdet_sequence,
)
from .drazin import (
    CompatibilityReport,
    GroupInverseResult,
    PdetResult,
    RegularizedLimitResult,
    compatibility_check,
    default_eps_schedule,
    group_inverse,
    pdet,
    pdet_lemma,
    regularized_limit,
    spectral_projector,
)
from .spectral import (
    SecularEvaluation,
    StabilityCertificate,
    charpoly_perturbed_eval,
    secular_value,
    stability_preserved,
)
from .control import (
    CovarianceTrace,
    Ellipse2D,
    GramianBuild,
    GramianGrowth,
    InfoFilterTrace,
    PerturbationReport,
    PerturbationTrial,
    build_gramian,
    covariance_trace,
    gramian_pdet_growth,
    growth_from_directions,
    info_filter_trace,
    perturbed_gramian_experiment,
    reach_ellipse,
)

__version__ = "0.1.0"
