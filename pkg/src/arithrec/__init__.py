"""Reconciliation of correlated Gaussian data via CDF binary expansion.

Gaussian source emulation, Distributional Transform Expansion (DTE),
induced binary-symmetric-channel analysis, mutual-information based
efficiency evaluation and LDPC syndrome-coding reconciliation.
"""
__version__ = "0.1.0"

from .source import (
    GaussianPairBatch,
    analytic_mutual_information,
    correlation_coefficient,
    db_to_linear,
    linear_to_db,
    sample_pairs,
)
from .dte import (
    BitPlanes,
    UnitPairBatch,
    bit_of_level,
    distributional_transform,
    expand,
    expand_batch,
    reassemble,
)
from .channel_analysis import (
    SubchannelModel,
    alpha1,
    alpha2,
    alpha_empirical,
    bsc_capacity,
    event_probability,
    quantile_boundary,
    subchannel_model,
)
from .mi_estimators import MiEstimate, knn_mi_cd, ksg_mi, plugin_mi_dd
from .efficiency import (
    EfficiencyReport,
    beta_q_forward,
    beta_q_max,
    beta_q_reverse,
    beta_total,
    efficiency_point,
    efficiency_sweep,
)
from .ldpc import (
    DecodeOutcome,
    ParityCheckMatrix,
    conditional_bit_llr,
    decode_syndrome,
    generate_regular,
    hard_bsc_llr,
    load_alist,
    syndrome,
    write_alist,
)
from .pipeline import (
    DESK_MATRIX,
    MatrixSource,
    ReconcileReport,
    ReconcileTrialConfig,
    run_mi_preservation,
    run_reconciliation_experiment,
    run_reconciliation_trial,
)
