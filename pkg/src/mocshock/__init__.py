"""
Exact radial solutions for self-interacting cold media by the method of
characteristics: expanding charged spheres and cylinders, collapsing
self-gravitating dust, shock onset where layers cross, and the wave-function
reconstruction of the resulting laminar flows.
"""

from .characteristics import (
    INFINITE_VELOCITY,
    Characteristic,
    ShockReport,
    characteristic_bundle,
    classical_electron_radius,
    collapse_time,
    jacobian,
    layer_radius,
    layer_velocity,
    onset_times,
    shock_onset,
    v_max_energy,
)
from .config import PRESETS, ScenarioConfig, load_config
from .density import (
    FieldSnapshot,
    density_along,
    density_uniform,
    distribution_function,
    label_of,
    sample_field,
    time_from_density_uniform,
)
from .errors import (
    CflViolation,
    ConfigError,
    ConvergenceError,
    DomainError,
    MocShockError,
    NormalizationError,
    RangeError,
    ShockError,
    SingularError,
    StepFailure,
    UnsupportedError,
)
from .profiles import (
    Interaction,
    Lognormal,
    PhysicsParams,
    Symmetry,
    Tabulated,
    Uniform,
    coupling,
    cumulative,
    density0,
    gamma,
    lam,
    lam_prime,
    lambda_from_gamma,
    lambda_prime,
)
from .quantum import (
    QuantumFields,
    QuantumParams,
    phase_field,
    potential_field,
    radial_laplacian,
    reconstruct,
    velocity_field,
    wave_function,
)
from .specfun import (
    BranchKind,
    erf,
    erfi_integral,
    eval_f,
    eval_f_derivative,
    eval_p,
    eval_p_derivative,
    eval_p_with_derivative,
)
from .validator import (
    Check,
    EulerianState,
    OdeRun,
    continuity_residual,
    energy_drift,
    kappa,
    ode_oracle,
    pairwise_crossing_time,
    pde_evolve,
)

__version__ = "0.1.0"
