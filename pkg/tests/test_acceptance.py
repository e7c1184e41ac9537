"""Acceptance suite: one test per criterion, reported as PASS/FAIL lines."""

import inspect
import io
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from classleak import (
    BinormalModel,
    ClassPriors,
    CurveTable,
    RateSet,
    auroc_from_leakage,
    auroc_rank_exact,
    binormal_auroc,
    binormal_kl_pn,
    build_leakage_binormal,
    capped_admission_point,
    compare_dominance,
    confusion_sweep,
    false_discovery_rate,
    f_beta,
    f_beta_harmonic,
    ideal_leakage,
    identity_leakage,
    ingest,
    kl_divergence_from_leakage,
    leakage_from_data,
    pr_curve,
    roc_curve,
)
from classleak.cli import run

criterion = pytest.mark.criterion
SEED = 7


def dataset(neg, pos):
    return ingest([(float(x), 0) for x in neg] + [(float(x), 1) for x in pos])


def pair_count(neg, pos):
    """Mann-Whitney U of the positives, doubled so it stays an integer."""
    u = stats.mannwhitneyu(pos, neg, alternative="two-sided", method="asymptotic").statistic
    return int(round(2 * u))


def hanley_mcneil_se(a, n_pos, n_neg):
    q1 = a / (2 - a)
    q2 = 2 * a * a / (1 + a)
    var = (a * (1 - a) + (n_pos - 1) * (q1 - a * a) + (n_neg - 1) * (q2 - a * a)) / (n_pos * n_neg)
    return math.sqrt(var)


@criterion(1, "staircase AUROC equals the Mann-Whitney pair count exactly")
def test_geometric_rank_identity():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    for _ in range(200):
        n_neg, n_pos = rng.integers(2, 51, size=2)
        neg = rng.normal(0.0, 1.0, n_neg)
        pos = rng.normal(rng.uniform(-1, 2), rng.uniform(0.5, 2), n_pos)
        g = leakage_from_data(dataset(neg, pos))
        geometric = 1 - g.area_exact()
        oracle = Fraction(pair_count(neg, pos), 2 * n_neg * n_pos)
        assert geometric == oracle
        assert auroc_rank_exact(dataset(neg, pos)) == oracle
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


@criterion(2, "binormal AUROC at grid 1e5 within 1e-6 of the closed form")
def test_binormal_auroc_grid():
    start = time.perf_counter()
    worst = 0.0
    for a in (0.25, 0.5, 1.0, 1.5, 2.0):
        for b in (-1.0, 0.0, 0.5, 1.0, 2.0, 3.0):
            g = build_leakage_binormal(BinormalModel.from_shape(a, b))
            closed = float(stats.norm.cdf(b / math.sqrt(1 + a * a)))
            worst = max(worst, abs(auroc_from_leakage(g, 100_000) - closed))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6, f"worst error {worst:.3e}"
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


# (mu_n, sigma_n, mu_p, sigma_p)
KL_MODELS = [
    (0.0, 1.0, 1.0, 1.0),   # equal spread, unit gap: 0.5
    (0.0, 2.0, 0.0, 1.0),   # double negative spread
    (0.0, 1.0, 0.5, 1.0),
    (0.0, 1.0, -1.0, 1.0),
    (0.0, 1.25, 0.0, 1.0),
    (0.0, 1.25, 1.0, 1.0),
    (0.0, 1.5, 1.5, 1.0),
    (0.0, 2.0, 2.0, 1.0),
    (0.0, 3.0, 1.0, 1.0),
    (0.5, 3.0, 2.5, 2.0),
]


@criterion(3, "KL from the leakage density within 1e-3 of the Gaussian closed form")
def test_kl_identity():
    for mu_n, sigma_n, mu_p, sigma_p in KL_MODELS:
        m = BinormalModel(mu_n=mu_n, sigma_n=sigma_n, mu_p=mu_p, sigma_p=sigma_p)
        est = kl_divergence_from_leakage(build_leakage_binormal(m), 100_000, 1e-6)
        assert abs(est - binormal_kl_pn(m)) <= 1e-3, (m, est)
    unit = BinormalModel(0.0, 1.0, 1.0, 1.0)
    assert abs(kl_divergence_from_leakage(build_leakage_binormal(unit)) - 0.5) <= 1e-3


@criterion(4, "Monte Carlo Pr(x_p > x_n) within 3 standard errors of AUROC")
def test_monte_carlo_auroc():
    rng = np.random.default_rng(SEED)
    n = 1_000_000
    for a, b in [(1.0, 0.0), (1.0, 1.0), (0.5, 2.0), (2.0, 1.0), (1.5, -0.5)]:
        m = BinormalModel.from_shape(a, b)
        neg, pos = m.sample(rng, n, n)
        est = float(np.mean(pos > neg))
        A = binormal_auroc(m)
        assert abs(est - A) <= 3 * math.sqrt(A * (1 - A) / n)
        assert abs(est - auroc_from_leakage(build_leakage_binormal(m))) <= 3 * math.sqrt(A * (1 - A) / n)


@criterion(5, "ROC is prevalence invariant")
def test_roc_prevalence_invariance():
    params = inspect.signature(roc_curve).parameters
    assert list(params) == ["curve", "grid_size"]
    src = inspect.getsource(roc_curve)
    assert "prior" not in src and "pi_p" not in src
    rng = np.random.default_rng(SEED)
    total = 4000
    areas = []
    for pi in (0.1, 0.5, 0.9):
        n_pos = int(round(pi * total))
        n_neg = total - n_pos
        neg = rng.normal(0.0, 1.0, n_neg)
        pos = rng.normal(1.0, 1.0, n_pos)
        a = roc_curve(leakage_from_data(dataset(neg, pos)), 1001).area()
        areas.append((a, hanley_mcneil_se(a, n_pos, n_neg)))
    for i in range(3):
        for j in range(i + 1, 3):
            (a1, s1), (a2, s2) = areas[i], areas[j]
            assert abs(a1 - a2) <= 3 * math.hypot(s1, s2), areas


@criterion(6, "PR precision strictly increasing in pi_p at every recall")
def test_pr_prevalence_dependence():
    g = build_leakage_binormal(BinormalModel.from_shape(0.5, 1.0))
    pis = (0.1, 0.3, 0.5, 0.7, 0.9)
    tables = [pr_curve(g, ClassPriors.from_positive(p), 100_000) for p in pis]
    # near recall 0 precision is 1 - O(1e-21), which rounds to 1.0; the
    # complement carries the strict ordering there
    fdr = [false_discovery_rate(g, ClassPriors.from_positive(p), tables[0].x) for p in pis]
    for lo, hi in zip(fdr, fdr[1:]):
        assert np.all(hi < lo)
    ulp = np.finfo(float).eps
    for (lo, hi), (f_lo, f_hi) in zip(zip(tables, tables[1:]), zip(fdr, fdr[1:])):
        assert np.array_equal(lo.x, hi.x)
        assert np.all(hi.y >= lo.y)
        # wherever the exact gap spans a few ulps of 1 the doubles show it too
        resolved = (f_lo - f_hi) > 4 * ulp
        assert resolved.mean() > 0.99
        assert np.all(hi.y[resolved] > lo.y[resolved])
    for t, f in zip(tables, fdr):
        np.testing.assert_allclose(t.y, 1.0 - f, atol=1e-15)


@criterion(7, "random and ideal classifier corner cases")
def test_corner_cases():
    assert abs(auroc_from_leakage(identity_leakage()) - 0.5) <= 1e-12
    assert auroc_from_leakage(ideal_leakage()) == 1.0
    for pi in (0.1, 0.5, 0.9):
        priors = ClassPriors.from_positive(pi)
        np.testing.assert_allclose(pr_curve(identity_leakage(), priors, 10_000).y, pi, rtol=1e-12)
        assert np.all(pr_curve(ideal_leakage(), priors, 10_000).y == 1.0)


@criterion(8, "global dominance carries over to ROC and PR tables")
def test_dominance_transfer():
    rng = np.random.default_rng(SEED)
    found = 0
    while found < 20:
        a = rng.uniform(0.3, 3.0)
        b1, b2 = np.sort(rng.uniform(-1.0, 3.0, 2))[::-1]
        # curves with different alphas always cross, so draw a shared one
        g1 = build_leakage_binormal(BinormalModel.from_shape(a, b1))
        g2 = build_leakage_binormal(BinormalModel.from_shape(a, b2))
        if compare_dominance(g1, g2).verdict != "global_strict":
            continue
        found += 1
        r1, r2 = roc_curve(g1, 2001), roc_curve(g2, 2001)
        assert np.all(r1.y >= r2.y) and np.any(r1.y[1:-1] > r2.y[1:-1])
        priors = ClassPriors.from_positive(rng.uniform(0.05, 0.95))
        p1, p2 = pr_curve(g1, priors, 2000), pr_curve(g2, priors, 2000)
        assert np.all(p1.y >= p2.y) and np.any(p1.y[:-1] > p2.y[:-1])


@criterion(9, "capped admission meets the cap and matches a dense-grid oracle")
def test_capped_admission():
    sym = build_leakage_binormal(BinormalModel(mu_n=0.0, sigma_n=1.0, mu_p=2.0, sigma_p=1.0))
    pt = capped_admission_point(sym, ClassPriors.from_positive(0.5), 0.5)
    assert abs(pt.tau - 1.0) <= 1e-6
    assert abs(pt.admission - 0.5) <= 1e-9

    rng = np.random.default_rng(SEED)
    fpr_grid = np.linspace(0.0, 1.0, 1_000_000)
    step = fpr_grid[1]
    for _ in range(10):
        a, b = rng.uniform(0.3, 3.0), rng.uniform(-1.0, 3.0)
        pi, m = rng.uniform(0.05, 0.95), rng.uniform(0.02, 0.98)
        model = BinormalModel.from_shape(a, b)
        pt = capped_admission_point(build_leakage_binormal(model), ClassPriors.from_positive(pi), m)
        assert abs(pi * pt.tpr + (1 - pi) * pt.fpr - m) <= 1e-9
        # oracle: last grid fpr whose admission stays within the cap
        t = stats.norm.isf(fpr_grid[1:-1])
        tpr = stats.norm.sf(a * t - b)
        adm = np.concatenate([[0.0], pi * tpr + (1 - pi) * fpr_grid[1:-1], [1.0]])
        best = fpr_grid[np.flatnonzero(adm <= m)[-1]]
        assert abs(pt.fpr - best) <= step


@criterion(10, "F-beta in rates equals the harmonic mean of precision and recall")
def test_f_beta_identity():
    rng = np.random.default_rng(SEED)
    for _ in range(1000):
        tpr = rng.uniform(1e-6, 1.0)
        fpr = rng.uniform(0.0, 1.0)
        pi = rng.uniform(0.01, 0.99)
        beta = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        r = RateSet(tpr, fpr, 1 - fpr, 1 - tpr)
        priors = ClassPriors.from_positive(pi)
        assert abs(f_beta(r, priors, beta) - f_beta_harmonic(r, priors, beta)) <= 1e-12


@criterion(11, "confusion cells partition P, N and T at every threshold")
def test_confusion_partition():
    rng = np.random.default_rng(SEED)
    for _ in range(50):
        n_neg, n_pos = rng.integers(1, 80, size=2)
        # integer scores force ties within and across classes
        d = dataset(rng.integers(0, 15, n_neg), rng.integers(3, 18, n_pos))
        for c in confusion_sweep(d):
            assert c.tp + c.fn == d.P
            assert c.tn + c.fp == d.N
            assert c.tp + c.fp + c.tn + c.fn == d.T


@criterion(12, "CLI figure families: ROC monotone in b, identity member, PR ordered by pi_p")
def test_figure_families(tmp_path):
    out = tmp_path / "roc"
    assert run(["binormal-family", "--alphas", "1", "--bs", "0,1,2,3", "--grid", "2001",
                "--output", str(out)], io.StringIO(), io.StringIO()) == 0
    rows = (out / "manifest.csv").read_text().splitlines()[1:]
    tables = {float(r.split(",")[2]): CurveTable.from_text((out / r.split(",")[-1]).read_text())
              for r in rows}
    bs = sorted(tables)
    assert bs == [0.0, 1.0, 2.0, 3.0]
    np.testing.assert_allclose(tables[0.0].y, tables[0.0].x, atol=1e-9)
    for lo, hi in zip(bs, bs[1:]):
        assert np.all(tables[hi].y >= tables[lo].y)
        assert np.all(tables[hi].y[1:-1] > tables[lo].y[1:-1])

    out = tmp_path / "pr"
    pis = ["0.1", "0.3", "0.5", "0.7", "0.9"]
    assert run(["pr", "--alphas", "0.5", "--bs", "1", "--pi-ps", ",".join(pis), "--grid", "2001",
                "--output", str(out)], io.StringIO(), io.StringIO()) == 0
    ys = [CurveTable.from_text((out / f"pr_pi{float(p)!r}.csv").read_text()).y for p in pis]
    for lo, hi in zip(ys, ys[1:]):
        assert np.all(hi >= lo)
        assert np.all(hi[hi < 1.0] > lo[hi < 1.0])
