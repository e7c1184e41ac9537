"""Binary-classifier evaluation through the class leakage function G = F_p o F_n^-1."""

from .analysis import (
    DominanceReport,
    OperatingConstraint,
    OperatingPoint,
    ParetoPoint,
    RiskPoint,
    bounded_risk_region_check,
    capped_admission_point,
    compare_dominance,
    min_risk_point,
    pareto_front,
)
from .binormal import (
    BinormalModel,
    binormal_auroc,
    binormal_kl_pn,
    binormal_leakage,
    binormal_roc_point,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)
from .curves import (
    CurveTable,
    false_discovery_rate,
    miss_rate_from_specificity,
    pr_curve,
    roc_curve,
    roc_inverse,
)
from .errors import *  # noqa: F401,F403
from .leakage import (
    BinormalLeakage,
    EmpiricalLeakage,
    FunctionLeakage,
    LeakageCurve,
    auroc_from_leakage,
    auroc_rank_exact,
    auroc_rank_oracle,
    build_leakage_binormal,
    build_leakage_empirical,
    ideal_leakage,
    identity_leakage,
    kl_divergence_from_leakage,
    leakage_area,
    leakage_from_data,
    prob_negative_ge_positive,
)
from .metrics import (
    ConfusionCounts,
    RateSet,
    accuracy,
    brier_score,
    confusion_at,
    confusion_sweep,
    f_beta,
    f_beta_harmonic,
    metrics_report,
    precision_at,
    rates_from_counts,
    reliability_bins,
)
from .score_model import (
    ClassPriors,
    EmpiricalCdf,
    Label,
    LabeledScores,
    conditional_cdf,
    estimate_priors,
    ingest,
)

__version__ = "0.1.0"
