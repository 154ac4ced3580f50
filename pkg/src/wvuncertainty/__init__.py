"""Uncertainty relations for approximation and estimation built on weak values."""

from .errors import (
    ConvergenceFailure,
    DegenerateInput,
    DegenerateSpectrum,
    DegenerateVariance,
    DimensionMismatch,
    InternalConsistencyError,
    NoQuantumComponent,
    NonHermitianInput,
    NonRealFunction,
    NotLocallyUnbiased,
    NotNormalized,
    ParseError,
    UncertaintyError,
    ValidationError,
    VanishingFisher,
    ZeroOverlap,
)
from .estimation import (
    EstimationSetup,
    FisherReport,
    MonteCarloResult,
    OutcomeDistribution,
    cramer_rao_report,
    evolve,
    fisher_information,
    local_unbiasedness_check,
    monte_carlo_estimate,
    optimal_estimator,
    outcome_distribution,
    time_energy_report,
)
from .inequalities import (
    EqualityDiagnostics,
    InequalityReport,
    covariance_inequality,
    equality_diagnostics,
    general_inequality,
    optimal_inequality,
    rk_inequality,
    schroedinger_inequality,
)
from .linops import EigenSystem, HermitianCheckReport, check_hermitian, eigh, generator_exponential
from .quantum import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    MomentReport,
    PhysicsConfig,
    PureState,
    bloch_state,
    expectation,
    moments,
    normalize,
    seminorm,
)
from .weakval import (
    IdentityReport,
    SpectralBasis,
    SpectrumFunction,
    WeakValueProfile,
    approximation_error,
    operator_function,
    optimal_commutant,
    optimal_proxy,
    spectral_basis,
    verify_weak_identities,
    weak_value_profile,
)

__version__ = "0.1.0"
