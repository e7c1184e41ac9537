"""
The leakage function of a tiny dataset
======================================

Two negatives and two positives are enough to see every piece: the step
leakage function, its staircase ROC, and the fact that the area under that
staircase is a pair count.
"""

from classleak import (
    auroc_rank_exact,
    ingest,
    leakage_from_data,
    roc_curve,
)

# negatives at 1 and 3, positives at 2 and 4
data = ingest([(1.0, 0), (3.0, 0), (2.0, 1), (4.0, 1)])
g = leakage_from_data(data)

# G(u) is the share of positives that fall at or below the u-quantile of the
# negatives; at the median negative (score 1) no positive has leaked yet
for u in (0.25, 0.5, 0.75, 1.0):
    print(f"G({u}) = {g(u)}")

# the empirical G(1) is 0.5, not 1: the top positive beats every negative

###############################################################################
# Area under the staircase versus the rank statistic
# --------------------------------------------------
geometric = 1 - g.area_exact()
rank = auroc_rank_exact(data)
print("geometric AUROC:", geometric, " rank AUROC:", rank)
assert geometric == rank

table = roc_curve(g, grid_size=5)
for x, y, tau in table.points:
    print(f"fpr={x:.2f} tpr={y:.2f} tau={tau}")
print("table area:", table.area())
