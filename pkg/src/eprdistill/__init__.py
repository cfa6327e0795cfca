"""Truncated-Fock-basis simulator for heralded distillation of two-mode
squeezed light by noiseless linear amplification, with analytic reference
models, entanglement measures, and an equivalent-state solver."""

from .channels import (
    ChannelParams,
    HeraldingImpossibleError,
    ancilla_photon,
    beamsplitter,
    beamsplitter_unitary,
    herald_click,
    loss_channel,
    loss_kraus_operators,
    nla_catalysis,
    pump_rotation_degrade,
    tmsv_state,
)
from .equivalent import EquivalentSolve, EquivalentState, equivalent_variances, solve_equivalent
from .fock import (
    DensityMatrix,
    HilbertConfig,
    InvalidStateError,
    OperatorMatrix,
    annihilation_operator,
    apply_unitary,
    basis_vector,
    creation_operator,
    expectation,
    fidelity_with_pure,
    normalize,
    number_operator,
    partial_trace,
    pure_state,
    tensor_product,
    total_number_operator,
    vacuum_state,
)
from .models import (
    BETA_OPTIMAL,
    V_DIFF_OPTIMAL,
    beta_from_gain,
    degraded_variances,
    deterministic_bound,
    ideal_variances,
    optimal_gain,
    sp_model_covariance,
    sp_model_herald_probability,
    tmsv_covariance,
)
from .quadratures import (
    CovarianceSummary,
    DuanResult,
    apply_detection_efficiency,
    covariance_summary,
    duan_inseparability,
    joint_quadrature_pdf,
    quadrature_operators,
    sample_quadratures,
)
from .scenario import (
    ConfigError,
    GainSpec,
    ScenarioConfig,
    SweepResult,
    SweepRow,
    run_equivalence,
    run_sampling,
    run_scenario,
)

__version__ = "0.1.0"
