"""openeff: exact toric oracles and numerical audits for openness effectiveness.

The package computes, exactly where the monomial structure allows and
numerically otherwise, the quantities controlling effective strong openness
on unit polydiscs: jumping numbers, multiplier ideals, generalized Bergman
kernels, the threshold function and its inversion, optimal sublevel-volume
bounds, and the constructive cut-off/ODE machinery behind them.
"""
from .toric import (
    INFINITE_JUMP,
    MonomialIdeal,
    MonomialWeight,
    PiScaled,
    PolyFunction,
    PreconditionError,
    jumping_number,
    membership,
    monomial_norm_sq,
    multiplier_ideal,
    semicontinuity_check,
    weighted_norm_sq,
)
from .scalars import (
    berndtsson_compare,
    q_analysis,
    q_eval,
    theta_bound_check,
    theta_eval,
    theta_invert,
)
from .kernel import (
    EffectivenessReport,
    KernelResult,
    c_fp,
    classical_bergman,
    effective_p_report,
    kernel_inv,
    kernel_inv_from_sq,
    mc_weighted_norm,
)
from .asymptotics import (
    DkReport,
    JmReport,
    band_volume,
    dk_asymptote_report,
    jm_asymptote_report,
    mc_sublevel,
    sublevel_volume,
)
from .weights import (
    OdeWitness,
    WeightFamilyParams,
    a_factor,
    a_factor_jm,
    b_eval,
    chain_audit,
    gz_residuals,
    gz_witness,
    gzjm_residuals,
    gzjm_witness,
    weight_family_eval,
)
from .montecarlo import McConfig, McEstimate

__version__ = "0.1.0"
