"""Thermodynamics of sudden quenches in chains of coupled harmonic oscillators."""

from .chain import ChainSpec, NormalModeData, QuadraticForm, build_h1, build_h2, normal_modes, spectrum
from .correlations import (
    CorrelationReport,
    TwoModeCov,
    equilibrium_covariance,
    gaussian_discord,
    lag_correlation_curves,
    log_negativity,
    log_negativity_closed_form,
)
from .errors import (
    ContinuationError,
    CouplingTooStrongError,
    DegeneracyWarning,
    DimensionGuardError,
    InvalidSpecError,
    NumericalError,
    OptimizerError,
    QuenchError,
    TruncationWarning,
)
from .interferometer import NetworkPlan, reck_decompose, reconstruct
from .symplectic import (
    BeamSplitter,
    DisplacedSqueezedState,
    GaussianState,
    OpticalNetwork,
    Rotation,
    Squeezer,
    SymplecticOp,
    beam_splitter,
    coherent_echo,
    coherent_transform,
    overlap_dss,
    propagator_network,
    rotation,
    squeezer,
    thermal_state,
)
from .work import (
    ThermoReport,
    WorkCharacteristic,
    average_work,
    characteristic_function,
    free_energy_change,
    jarzynski_check,
    nonequilibrium_lag,
    partition_functions,
    rwa_statistics,
)

__version__ = "0.1.0"
