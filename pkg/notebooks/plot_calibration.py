"""
Calibration checks
==================

Discrimination says nothing about whether a score of 0.7 means "70% likely".
The Brier score and a reliability table answer that separately.
"""

import numpy as np

from classleak import brier_score, ingest, reliability_bins

rng = np.random.default_rng(3)
n = 20_000
scores = rng.uniform(0, 1, n)

# calibrated: labels drawn with probability equal to the score
labels = rng.uniform(0, 1, n) < scores
good = ingest(list(zip(scores.tolist(), labels.astype(int).tolist())))

# overconfident: same labels, scores pushed toward 0 and 1
pushed = np.clip(0.5 + 1.6 * (scores - 0.5), 0, 1)
bad = ingest(list(zip(pushed.tolist(), labels.astype(int).tolist())))

for name, data in (("calibrated", good), ("overconfident", bad)):
    print(f"{name}: Brier {brier_score(data):.4f}")
    for b in reliability_bins(data, 5):
        print(f"  [{b.lower:.1f}, {b.upper:.1f}] mean score {b.mean_score:.3f} "
              f"positive fraction {b.positive_fraction:.3f} (n={b.count})")
