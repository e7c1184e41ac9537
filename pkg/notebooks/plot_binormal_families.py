"""
Binormal ROC and PR families
============================

Gaussian class scores reduce to two shape numbers: the spread ratio alpha and
the normalized mean gap b. Raising b pushes the whole ROC up; changing the
class prevalence leaves the ROC alone but moves the PR curve.
"""

import numpy as np

from classleak import (
    BinormalModel,
    ClassPriors,
    auroc_from_leakage,
    binormal_auroc,
    build_leakage_binormal,
    pr_curve,
    roc_curve,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

###############################################################################
# ROC curves for alpha = 1 and growing b
# --------------------------------------
rocs = {}
for b in (0.0, 1.0, 2.0, 3.0):
    g = build_leakage_binormal(BinormalModel.from_shape(1.0, b))
    rocs[b] = roc_curve(g, 501)
    print(f"b={b}: AUROC {auroc_from_leakage(g):.6f} "
          f"(closed form {binormal_auroc(BinormalModel.from_shape(1.0, b)):.6f})")

# b = 0 is the chance diagonal
assert np.allclose(rocs[0.0].y, rocs[0.0].x)

###############################################################################
# PR curves at alpha = 0.5, b = 1 for several prevalences
# -------------------------------------------------------
g = build_leakage_binormal(BinormalModel.from_shape(0.5, 1.0))
prs = {pi: pr_curve(g, ClassPriors.from_positive(pi), 500) for pi in (0.1, 0.3, 0.5, 0.7, 0.9)}
for pi, t in prs.items():
    print(f"pi_p={pi}: precision at recall 0.5 = {t.y[249]:.4f}")

if plt is not None:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    for b, t in rocs.items():
        ax1.plot(t.x, t.y, label=f"b={b}")
    ax1.set_xlabel("fpr")
    ax1.set_ylabel("tpr")
    ax1.legend()
    for pi, t in prs.items():
        ax2.plot(t.x, t.y, label=f"pi_p={pi}")
    ax2.set_xlabel("recall")
    ax2.set_ylabel("precision")
    ax2.legend()
    fig.savefig("binormal_families.svg")
