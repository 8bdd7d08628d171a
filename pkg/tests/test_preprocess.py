import math

import numpy as np
import pytest
from scipy.integrate import quad

from curvkit.curvature import CurvatureKind, curvature_all
from curvkit.errors import PreconditionError
from curvkit.preprocess import (
    GmmFit,
    PreprocessConfig,
    ThresholdMode,
    find_threshold,
    fit_gmm2,
    mixture_density,
    preprocess_lrc,
    prune_at,
)
from curvkit.sbm import SbmSpec, sample_sbm

from .conftest import make_graph


def _mixture_draws(rng, n, mu=(-1.0, 1.0), sigma=(0.1, 0.1), w=0.5):
    pick = rng.random(n) < w
    return np.where(pick, rng.normal(mu[0], sigma[0], n), rng.normal(mu[1], sigma[1], n))


class TestFitGmm2:
    def test_recovers_separated_mixture(self):
        rng = np.random.default_rng(100)
        fit = fit_gmm2(_mixture_draws(rng, 1000))
        assert -1.05 <= fit.mu1 <= -0.95
        assert 0.95 <= fit.mu2 <= 1.05
        assert 0.45 <= fit.pi1 <= 0.55
        assert fit.converged

    def test_single_gaussian_still_ordered(self):
        # unimodal data sits on a likelihood ridge; EM needs extra iterations
        rng = np.random.default_rng(101)
        fit = fit_gmm2(rng.normal(0, 1, 400), PreprocessConfig(max_iter=20000))
        assert fit.mu1 <= fit.mu2
        assert fit.converged

    def test_too_few_values(self):
        with pytest.raises(PreconditionError, match="insufficient data"):
            fit_gmm2([1.0, 2.0, 3.0, 4.0, 5.0])

    def test_zero_variance(self):
        with pytest.raises(PreconditionError, match="degenerate data"):
            fit_gmm2([1.0] * 20)

    def test_loglik_monotone_and_weights_normalized(self):
        rng = np.random.default_rng(102)
        for seed in range(5):
            fit = fit_gmm2(_mixture_draws(np.random.default_rng(seed), 500))
            diffs = np.diff(fit.ll_trace)
            assert (diffs >= -1e-10 * (1 + np.abs(fit.ll_trace[:-1]))).all()
            assert fit.pi1 + fit.pi2 == pytest.approx(1.0, abs=1e-12)
            assert 0 < fit.pi1 < 1

    def test_determinism(self):
        rng = np.random.default_rng(103)
        vals = _mixture_draws(rng, 300)
        f1 = fit_gmm2(vals)
        f2 = fit_gmm2(vals)
        assert f1 == f2


def _manual_fit(pi1, mu1, mu2, s1, s2):
    return GmmFit(
        pi1=pi1,
        pi2=1 - pi1,
        mu1=mu1,
        mu2=mu2,
        sigma1=s1,
        sigma2=s2,
        log_likelihood=0.0,
        iterations=0,
        converged=True,
    )


class TestMixtureDensity:
    def test_symmetric_closed_form(self):
        fit = _manual_fit(0.5, -1.0, 1.0, 1.0, 1.0)
        expected = math.exp(-0.5) / math.sqrt(2 * math.pi)
        assert mixture_density(fit, 0.0) == pytest.approx(expected, abs=1e-12)

    def test_tail_decay(self):
        fit = _manual_fit(0.5, -1.0, 1.0, 0.5, 0.5)
        assert mixture_density(fit, fit.mu1) > mixture_density(fit, 40.0)

    def test_integrates_to_one(self):
        fit = _manual_fit(0.3, -2.0, 1.5, 0.4, 0.8)
        total, _ = quad(
            lambda x: mixture_density(fit, x),
            fit.mu1 - 10 * fit.sigma1,
            fit.mu2 + 10 * fit.sigma2,
            limit=200,
        )
        assert total == pytest.approx(1.0, abs=1e-6)


class TestFindThreshold:
    def test_symmetric_valley_at_zero(self):
        fit = _manual_fit(0.5, -1.0, 1.0, 0.1, 0.1)
        res = find_threshold(fit)
        assert res.mode is ThresholdMode.VALLEY
        assert res.beta == pytest.approx(0.0, abs=1e-6)
        assert fit.mu1 < res.beta < fit.mu2

    def test_uneven_weights_shift_toward_light_component(self):
        fit = _manual_fit(0.9, -1.0, 1.0, 0.3, 0.3)
        res = find_threshold(fit)
        assert res.mode is ThresholdMode.VALLEY
        assert res.beta > 0.0
        # grid oracle over the closed-form density
        xs = np.linspace(-1, 1, 200001)
        dens = [mixture_density(fit, x) for x in xs]
        assert res.beta == pytest.approx(xs[int(np.argmin(dens))], abs=1e-4)

    def test_unimodal_skips(self):
        fit = _manual_fit(0.5, 0.0, 0.01, 1.0, 1.0)
        assert find_threshold(fit).mode is ThresholdMode.DEGENERATE_SKIP

    def test_equal_means_skip(self):
        fit = _manual_fit(0.5, 0.3, 0.3, 1.0, 1.0)
        assert find_threshold(fit).mode is ThresholdMode.DEGENERATE_SKIP


def _k2_plus_c4s(n_cycles=3):
    edges = [(0, 1)]
    base = 2
    for _ in range(n_cycles):
        edges += [
            (base, base + 1),
            (base + 1, base + 2),
            (base + 2, base + 3),
            (base + 3, base),
        ]
        base += 4
    return make_graph(edges)


class TestPreprocess:
    def test_sbm_pruning_separates_communities(self):
        g, labels = sample_sbm(SbmSpec.from_probs(60, 2, 0.8, 0.05, seed=11))
        pruned, fit, thr, report = preprocess_lrc(g)
        assert thr.mode is ThresholdMode.VALLEY
        assert pruned.n == g.n
        same = labels.labels[g.edges_u] == labels.labels[g.edges_v]
        kept = report.kept_mask
        across_removed = np.count_nonzero(~kept & ~same) / np.count_nonzero(~same)
        within_removed = np.count_nonzero(~kept & same) / np.count_nonzero(same)
        assert across_removed >= 0.90
        assert within_removed <= 0.05

    def test_all_equal_but_one_skips(self):
        g = _k2_plus_c4s()
        pruned, fit, thr, report = preprocess_lrc(g)
        assert thr.mode is ThresholdMode.DEGENERATE_SKIP
        assert pruned == g
        assert report.removed == 0

    def test_too_small(self, triangle):
        with pytest.raises(PreconditionError, match="insufficient data"):
            preprocess_lrc(triangle)

    def test_pruning_monotone_in_beta(self):
        g, _ = sample_sbm(SbmSpec.from_probs(40, 2, 0.7, 0.1, seed=3))
        values = curvature_all(g, CurvatureKind.LRC).values
        kept_sets = []
        for beta in (-1.0, 0.0, 0.5):
            pruned, _ = prune_at(g, values, beta)
            kept_sets.append(set(pruned.canonical_edges()))
        assert kept_sets[2] <= kept_sets[1] <= kept_sets[0]

    def test_ties_kept(self):
        g, _ = sample_sbm(SbmSpec.from_probs(30, 2, 0.8, 0.1, seed=5))
        values = curvature_all(g, CurvatureKind.LRC).values
        beta = float(values[len(values) // 2])
        pruned, report = prune_at(g, values, beta)
        assert report.edges_after == int(np.count_nonzero(values >= beta))

    def test_repeat_application_non_increasing(self):
        g, _ = sample_sbm(SbmSpec.from_probs(60, 2, 0.8, 0.05, seed=7))
        g1, _, thr1, rep1 = preprocess_lrc(g)
        g2, _, thr2, rep2 = preprocess_lrc(g1)
        assert rep2.edges_after <= rep1.edges_after
        if thr2.mode is ThresholdMode.DEGENERATE_SKIP:
            assert g2 == g1

    def test_determinism(self):
        g, _ = sample_sbm(SbmSpec.from_probs(60, 2, 0.8, 0.05, seed=13))
        out1 = preprocess_lrc(g)
        out2 = preprocess_lrc(g)
        assert out1[0] == out2[0]
        assert out1[1] == out2[1]
        assert out1[2].beta == out2[2].beta

    def test_custom_config_defaults(self):
        cfg = PreprocessConfig()
        assert cfg.max_iter == 500
        assert cfg.tol == 1e-8
        assert cfg.variance_floor_scale == 1e-6
