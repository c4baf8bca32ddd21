"""Acceptance criteria, one test each, at their stated tolerances.

Every test records a PASS/FAIL/SKIP line in ``conftest.ACCEPTANCE``; the
lines are printed in the terminal summary.  Criterion 4 needs user-supplied
Europarl data in the directory named by ``RANKLAW_EUROPARL_DIR``.
"""

import math
import os
import time

import numpy as np
import pytest
from scipy import integrate

from conftest import ACCEPTANCE, random_raw
from ranklaw.corpus import RawRankList, TokenizationConfig, build_rank_list, tokenize
from ranklaw.errors import DegenerateCorpusError
from ranklaw.estimator import MomentSummary, ParameterSet, estimate_alpha_beta, moments, transform
from ranklaw.reference import ESTIMATED, compare, load_language
from ranklaw.refine import jacobian, predict_log_f, refine, rmse
from ranklaw.search import GammaGrid, search
from ranklaw.series import RankFrequencySeries, compress, information_equivalence_check
from ranklaw.synth import synthesize


def record(key, ok, msg):
    ACCEPTANCE[key] = ("PASS" if ok else "FAIL", msg)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {msg}")


# --- 1: synthetic recovery ------------------------------------------------------

def test_criterion_1_synthetic_recovery():
    truth = ParameterSet(alpha=0.9, beta=1.5, log10_gamma=4.0, log10_C=10.0)
    start = time.perf_counter()
    series = compress(synthesize(truth, 10**6))
    est, _ = search(series)  # default grid: 0..10 step 0.001
    fit = refine(series, est)
    elapsed = time.perf_counter() - start
    checks = {
        "log10_gamma": abs(est.log10_gamma - truth.log10_gamma) <= 0.1,
        "alpha": abs(est.alpha - truth.alpha) <= 0.05,
        "alpha+beta": abs(est.alpha + est.beta - truth.alpha - truth.beta) <= 0.1,
        "fit rmse": fit.rmse_refined < 0.01,
        "runtime": elapsed < 60,
    }
    msg = (
        f"est log10_gamma={est.log10_gamma:.3f} alpha={est.alpha:.3f} "
        f"alpha+beta={est.alpha + est.beta:.3f} (truth 4.0/0.9/2.4); "
        f"fit rmse={fit.rmse_refined:.4f}; {elapsed:.1f}s; "
        f"failed: {[k for k, ok in checks.items() if not ok] or 'none'}"
    )
    record(1, all(checks.values()), msg)
    assert all(checks.values()), msg


# --- 2: beta moment round trip -------------------------------------------------

def test_criterion_2_beta_round_trip():
    rng = np.random.default_rng(2)
    worst = 0.0
    for a, b in zip(rng.uniform(0, 1, 100), rng.uniform(1, 5, 100)):
        mean = a / (a + b)
        var = a * b / ((a + b + 1) * (a + b) ** 2)
        alpha, beta = estimate_alpha_beta(MomentSummary.from_mean_variance(mean, var, b / (a + b)))
        worst = max(worst, abs(alpha - (1 - a)) / abs(1 - a), abs(beta - (a + b - 2)) / abs(a + b - 2))
    ok = worst < 1e-12
    record(2, ok, f"worst relative error {worst:.2e} over 100 (a, b) (limit 1e-12)")
    assert ok


# --- 3: step-moment oracle -------------------------------------------------------

def quad_moments(t, f):
    pieces = range(1, len(t))
    z = [
        math.fsum(
            integrate.quad(lambda x, k=k: f[i - 1] * x**k, t[i - 1], t[i], epsabs=0, epsrel=1e-13)[0]
            for i in pieces
        )
        for k in range(3)
    ]
    mean = z[1] / z[0]
    var = math.fsum(
        integrate.quad(lambda x: f[i - 1] * (x - mean) ** 2, t[i - 1], t[i], epsabs=0, epsrel=1e-13)[0]
        for i in pieces
    ) / z[0]
    return np.array(z + [mean, var])


def random_series(rng):
    n_points = int(rng.integers(4, 16))
    top = int(rng.integers(n_points, 10**5))
    ranks = np.concatenate(([0], np.sort(rng.choice(np.arange(1, top), n_points - 1, replace=False))))
    freqs = np.sort(rng.choice(np.arange(1, 10**6), n_points - 1, replace=False))[::-1]
    freqs = np.concatenate(([freqs[0] + rng.integers(1, 10**6)], freqs[1:], [0]))
    return RankFrequencySeries(ranks, freqs, int(ranks[-1] - 1), int(freqs[0]))


def test_criterion_3_step_moments():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        ts = transform(random_series(rng), rng.uniform(0, 6))
        m = moments(ts)
        got = np.array([m.Z0, m.Z1, m.Z2, m.mean, m.variance])
        want = quad_moments(ts.t, ts.f)
        worst = max(worst, float(np.max(np.abs(got - want) / np.abs(want))))
    ok = worst < 1e-10
    record(3, ok, f"worst relative error {worst:.2e} over 1000 series (limit 1e-10)")
    assert ok


# --- 4: Europarl reproduction -----------------------------------------------------

def test_criterion_4_europarl():
    root = os.environ.get("RANKLAW_EUROPARL_DIR")
    series = {}
    if root:
        for lang in ESTIMATED:
            s = load_language(root, lang)
            if s is not None:
                series[lang] = s
    if "en" not in series:
        ACCEPTANCE[4] = ("SKIP", "needs Europarl data; set RANKLAW_EUROPARL_DIR (see README)")
        pytest.skip("Europarl data not provided")
    verdicts = {}
    for lang, s in series.items():
        est, _ = search(s)
        verdicts[lang] = compare(lang, est, rmse(s, est))
    others = [l for l, v in verdicts.items() if l != "en" and v["passed"]]
    ok = verdicts["en"]["passed"] and len(others) >= 2
    en = verdicts["en"]
    msg = (
        f"en deviations {', '.join(f'{k}={v:+.3f}' for k, v in en['deviation'].items())}, "
        f"rmse={en['rmse']:.4f}; other languages within tolerance: {others or 'none'} "
        f"of {sorted(l for l in verdicts if l != 'en')}"
    )
    record(4, ok, msg)
    assert ok, msg


# --- 5: refinement never worsens --------------------------------------------------

LETTERS = (
    "it was the best of times it was the worst of times it was the age of wisdom "
    "it was the age of foolishness it was the epoch of belief it was the epoch of "
    "incredulity it was the season of light it was the season of darkness"
)


def char_counts(text):
    return tokenize(text, TokenizationConfig(unit="character"))


def acceptance_corpora():
    rng = np.random.default_rng(5)
    out = {
        "toy5": compress(RawRankList.from_frequencies([5, 3, 3, 1, 1])),
        "chars-two-symbol": compress(build_rank_list(char_counts("a" * 900 + "b" * 100))),
        "chars-letters": compress(build_rank_list(char_counts(LETTERS))),
    }
    for c, g in [(10, 4.0), (12, 4.0), (14, 4.0), (16, 3.0)]:
        out[f"synth-{c}-{g}"] = compress(synthesize(ParameterSet(0.9, 1.5, g, c), 10**6))
    for k in range(5):
        out[f"random-{k}"] = compress(random_raw(rng, int(rng.integers(20, 3000))))
    return out


def test_criterion_5_refinement_contract():
    failures, worst = [], -math.inf
    corpora = acceptance_corpora()
    for name, s in corpora.items():
        est, _ = search(s, GammaGrid(0.0, 10.0, 0.01))
        fit = refine(s, est)
        gap = fit.rmse_refined - rmse(s, est)
        worst = max(worst, gap)
        if not gap <= 1e-9:
            failures.append(name)
    ok = not failures
    record(5, ok, f"{len(corpora)} corpora; max(rmse_refined - rmse_estimated)={worst:.2e}; "
                  f"violations: {failures or 'none'}")
    assert ok


# --- 6: Jacobian ---------------------------------------------------------------

def test_criterion_6_jacobian():
    rng = np.random.default_rng(6)
    r = np.unique(np.round(np.logspace(0, 6, 60)))
    h = 1e-6
    worst = 0.0
    for _ in range(100):
        alpha = rng.uniform(0.0, 0.99)
        beta = rng.uniform(2.0, 3.0) - alpha  # admissible: alpha < 1, 2 < alpha + beta < 3
        p = ParameterSet(alpha, beta, rng.uniform(0, 8), rng.uniform(5, 20))
        base = p.as_array()
        numeric = np.empty((r.size, 4))
        for k in range(4):
            up, down = base.copy(), base.copy()
            up[k] += h
            down[k] -= h
            numeric[:, k] = (
                predict_log_f(ParameterSet.from_array(up), r) - predict_log_f(ParameterSet.from_array(down), r)
            ) / (2 * h)
        err = np.linalg.norm(jacobian(p, r) - numeric, axis=1) / np.linalg.norm(numeric, axis=1)
        worst = max(worst, float(err.max()))
    ok = worst < 1e-6
    record(6, ok, f"worst gradient relative error {worst:.2e} at 100 admissible points (limit 1e-6)")
    assert ok


# --- 7: degenerate diagnostics -----------------------------------------------------

def test_criterion_7_degenerate():
    toy = compress(build_rank_list(char_counts("a" * 900 + "b" * 100)))
    _, trace = search(toy)
    try:
        compress(build_rank_list(char_counts("a" * 50)))
        rejected = False
    except DegenerateCorpusError:
        rejected = True
    ok = trace.flat_tail and not trace.identifiable and rejected
    record(7, ok, f"two-symbol toy flat_tail={trace.flat_tail}; |V|=1 rejected={rejected}")
    assert ok


# --- 8: compression losslessness -------------------------------------------------

def test_criterion_8_lossless():
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(1000):
        vocab = int(rng.integers(2, 10**4 + 1))
        max_freq = int(rng.choice([3, 50, 10 * vocab]))  # few, some, hardly any ties
        raw = random_raw(rng, vocab, max_freq)
        bad += not information_equivalence_check(raw, compress(raw))
    ok = bad == 0
    record(8, ok, f"{bad} failures over 1000 random raw lists with |V| in [2, 1e4]")
    assert ok
