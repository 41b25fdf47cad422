"""Finite-time quantum Otto cycles under weak and projective energy monitoring."""

from .linops import (
    Channel,
    NonUniqueSteadyStateError,
    apply_channel,
    channel_from_kraus,
    compose,
    fixed_point,
    fixed_point_power,
)
from .oracle import (
    PerfectCoolingParams,
    w_avg_schemes_perfect,
    w_avg_tpm_perfect,
    w_avg_um_perfect,
    w_var_schemes_perfect,
)
from .pointer import conditional_state, outcome_density, suppression_factor
from .schemes import (
    CycleSpec,
    Scheme,
    SchemeConfig,
    WorkUnitaries,
    conditional_block,
    cycle_channel,
    nondegeneracy_check,
    steady_state_for_scheme,
)
from .stats import (
    GaussianMixture2D,
    characteristic_function,
    joint_distribution,
    kl_divergence,
    l1_coherence,
    marginal_work,
    moments,
    scheme_cumulants,
)
from .strokes import (
    BathSpec,
    Direction,
    Occupation,
    Parametric,
    PerfectReset,
    Protocol,
    StrokeHamiltonian,
    effective_transition_params,
    gibbs_state,
    parametric_unitary,
    protocol_unitary,
    thermal_channel,
)

__version__ = "0.1.0"
