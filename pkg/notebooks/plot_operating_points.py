"""
Choosing an operating point
===========================

A capacity cap fixes how many cases may be flagged; a risk budget bounds the
weighted error. Both pick a point on the same ROC. A Pareto sweep then trades
a performance number against a cost number across candidate thresholds.
"""

import numpy as np

from classleak import (
    BinormalModel,
    ClassPriors,
    OperatingConstraint,
    accuracy,
    binormal_roc_point,
    build_leakage_binormal,
    capped_admission_point,
    min_risk_point,
    pareto_front,
)
from classleak.metrics import RateSet

model = BinormalModel(mu_n=0.0, sigma_n=1.0, mu_p=2.0, sigma_p=1.0)
g = build_leakage_binormal(model)
priors = ClassPriors.from_positive(0.5)

###############################################################################
# Capped admission
# ----------------
# with equal spreads and priors, flagging half the population puts the
# threshold midway between the means
pt = capped_admission_point(g, priors, m=0.5)
print(f"tau={pt.tau:.12f} fpr={pt.fpr:.6f} tpr={pt.tpr:.6f} admission={pt.admission:.12f}")

cap = OperatingConstraint.capped_admission(0.5, priors)
print("feasible region boundary:", cap.boundary_line())

###############################################################################
# Least risk under a budget
# -------------------------
risk = OperatingConstraint.bounded_risk(cost_fp=1.0, cost_fn=1.0, c=0.2, priors=priors)
rp = min_risk_point(g, risk)
print(f"least risk {rp.risk:.6f} at tau={rp.tau:.4f} (feasible: {rp.feasible})")

###############################################################################
# Pareto sweep over thresholds
# ----------------------------
# performance is accuracy, cost is the share of positives missed
taus = np.linspace(-1.0, 4.0, 51)


def rates(t):
    fpr, tpr = binormal_roc_point(model, t)
    return RateSet(tpr, fpr, 1 - fpr, 1 - tpr)


front = pareto_front(
    performance_of=lambda t: accuracy(rates(t), priors),
    cost_of=lambda t: rates(t).fnr,
    candidates=taus,
    lambdas=np.linspace(0.0, 1.0, 11),
    tau_of=lambda t: t,
)
for p in front:
    print(f"lambda={p.lam:.1f} tau={p.operating_tau:.2f} "
          f"accuracy={p.performance:.4f} miss={p.cost:.4f}")
