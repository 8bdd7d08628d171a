"""Curvature-histogram pruning: fit a two-component Gaussian mixture to the
per-edge values, cut at the density valley between the component means, and
drop every edge below the cut.

Everything in this module is deterministic: EM starts from a sorted
half-split of the data and no randomness is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curvature import CurvatureKind, curvature_all
from .errors import PreconditionError
from .graph import Graph, remove_edges

__all__ = [
    "GmmFit",
    "ThresholdMode",
    "ThresholdResult",
    "PruneReport",
    "PreprocessConfig",
    "fit_gmm2",
    "mixture_density",
    "find_threshold",
    "preprocess_lrc",
]

MIN_EDGES = 10
_GRID_POINTS = 2049


@dataclass(frozen=True)
class PreprocessConfig:
    max_iter: int = 500
    tol: float = 1e-8
    variance_floor_scale: float = 1e-6


@dataclass(frozen=True)
class GmmFit:
    """Two-component 1-D Gaussian mixture, components ordered mu1 <= mu2."""

    pi1: float
    pi2: float
    mu1: float
    mu2: float
    sigma1: float
    sigma2: float
    log_likelihood: float
    iterations: int
    converged: bool
    ll_trace: tuple[float, ...] = field(repr=False, default=())


class ThresholdMode(str, Enum):
    VALLEY = "valley"
    DEGENERATE_SKIP = "degenerate_skip"


@dataclass(frozen=True)
class ThresholdResult:
    beta: float | None
    mode: ThresholdMode
    grid_argmin: float | None = None
    density_at_beta: float | None = None


@dataclass(frozen=True)
class PruneReport:
    edges_before: int
    edges_after: int
    removed: int
    beta_used: float | None
    kept_mask: np.ndarray = field(repr=False, default=None)


def _log_density(values: np.ndarray, pi: np.ndarray, mu: np.ndarray, var: np.ndarray):
    # (n, 2) per-component weighted log densities and their logsumexp
    z = values[:, None] - mu[None, :]
    comp = (
        np.log(pi)[None, :]
        - 0.5 * np.log(2.0 * np.pi * var)[None, :]
        - 0.5 * z * z / var[None, :]
    )
    hi = comp.max(axis=1)
    ll = hi + np.log(np.exp(comp - hi[:, None]).sum(axis=1))
    return comp, ll


def fit_gmm2(values, config: PreprocessConfig = PreprocessConfig()) -> GmmFit:
    """EM fit of a two-component 1-D Gaussian mixture.

    Initialization is the sorted half-split (component 1 from the lower half,
    component 2 from the upper half, weights 0.5/0.5); variances are floored
    at ``variance_floor_scale * Var(values)``; iteration stops when the
    log-likelihood improvement falls below ``tol * (1 + |ll|)``.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if len(x) < MIN_EDGES:
        raise PreconditionError("insufficient data")
    total_var = float(np.var(x))
    if total_var == 0.0:
        raise PreconditionError("degenerate data")
    var_floor = config.variance_floor_scale * total_var

    xs = np.sort(x)
    half = len(xs) // 2
    lo, hi = xs[:half], xs[half:]
    mu = np.array([lo.mean(), hi.mean()])
    var = np.array([max(float(lo.var()), var_floor), max(float(hi.var()), var_floor)])
    pi = np.array([0.5, 0.5])

    trace: list[float] = []
    prev_ll = -np.inf
    converged = False
    iterations = 0
    floored = False
    for iterations in range(1, config.max_iter + 1):
        comp, ll_i = _log_density(x, pi, mu, var)
        ll = float(ll_i.sum())
        # EM is monotone unless the variance floor was active last M-step
        if trace and not floored and ll < trace[-1] - 1e-10 * (1.0 + abs(trace[-1])):
            raise AssertionError("EM log-likelihood decreased")
        trace.append(ll)
        if math.isfinite(prev_ll) and abs(ll - prev_ll) < config.tol * (1.0 + abs(ll)):
            converged = True
            break
        prev_ll = ll
        # E-step
        resp = np.exp(comp - ll_i[:, None])
        # M-step
        nk = resp.sum(axis=0)
        nk = np.maximum(nk, 1e-300)
        pi = nk / len(x)
        mu = (resp * x[:, None]).sum(axis=0) / nk
        var = (resp * (x[:, None] - mu[None, :]) ** 2).sum(axis=0) / nk
        floored = bool((var < var_floor).any())
        var = np.maximum(var, var_floor)
    if mu[0] > mu[1]:
        mu = mu[::-1]
        var = var[::-1]
        pi = pi[::-1]
    return GmmFit(
        pi1=float(pi[0]),
        pi2=float(pi[1]),
        mu1=float(mu[0]),
        mu2=float(mu[1]),
        sigma1=float(np.sqrt(var[0])),
        sigma2=float(np.sqrt(var[1])),
        log_likelihood=trace[-1],
        iterations=iterations,
        converged=converged,
        ll_trace=tuple(trace),
    )


def _normal_pdf(x: float, mu: float, sigma: float) -> float:
    z = (x - mu) / sigma
    return math.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def mixture_density(fit: GmmFit, x: float) -> float:
    return fit.pi1 * _normal_pdf(x, fit.mu1, fit.sigma1) + fit.pi2 * _normal_pdf(
        x, fit.mu2, fit.sigma2
    )


def find_threshold(fit: GmmFit) -> ThresholdResult:
    """Valley of the mixture density on [mu1, mu2].

    Locates the minimum on a 2049-point uniform grid, then refines the
    bracketing cell by golden-section search to width 1e-10. Two degenerate
    shapes skip pruning instead of guessing a cutoff: the grid minimum
    sitting within one cell of either end (no interior valley, effectively
    unimodal) and a density that underflows to exactly zero between the
    means (two isolated spikes, no localizable valley).
    """
    if fit.mu1 >= fit.mu2:
        return ThresholdResult(beta=None, mode=ThresholdMode.DEGENERATE_SKIP)
    xs = np.linspace(fit.mu1, fit.mu2, _GRID_POINTS)
    dens = np.array([mixture_density(fit, float(t)) for t in xs])
    k = int(np.argmin(dens))
    if dens[k] == 0.0 or k <= 1 or k >= _GRID_POINTS - 2:
        return ThresholdResult(
            beta=None, mode=ThresholdMode.DEGENERATE_SKIP, grid_argmin=float(xs[k])
        )
    a, b = float(xs[k - 1]), float(xs[k + 1])
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = mixture_density(fit, c)
    fd = mixture_density(fit, d)
    while b - a > 1e-10:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = mixture_density(fit, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = mixture_density(fit, d)
    beta = 0.5 * (a + b)
    return ThresholdResult(
        beta=beta,
        mode=ThresholdMode.VALLEY,
        grid_argmin=float(xs[k]),
        density_at_beta=mixture_density(fit, beta),
    )


def prune_at(g: Graph, values: np.ndarray, beta: float) -> tuple[Graph, PruneReport]:
    """Keep exactly the edges whose value is >= beta (ties kept)."""
    mask = values >= beta
    pruned = remove_edges(g, mask)
    return pruned, PruneReport(
        edges_before=g.m,
        edges_after=pruned.m,
        removed=g.m - pruned.m,
        beta_used=beta,
        kept_mask=mask,
    )


def preprocess_lrc(
    g: Graph,
    config: PreprocessConfig = PreprocessConfig(),
    kind: CurvatureKind = CurvatureKind.LRC,
    workers: int = 1,
) -> tuple[Graph, GmmFit, ThresholdResult, PruneReport]:
    """Full pruning pipeline: per-edge curvature, mixture fit, valley cut.

    The node set is preserved (pruning may isolate nodes). On a degenerate
    fit the graph is returned unchanged.
    """
    if g.m < MIN_EDGES:
        raise PreconditionError("insufficient data")
    curv = curvature_all(g, kind, workers=workers)
    fit = fit_gmm2(curv.values, config)
    thr = find_threshold(fit)
    if thr.mode is ThresholdMode.DEGENERATE_SKIP:
        report = PruneReport(
            edges_before=g.m,
            edges_after=g.m,
            removed=0,
            beta_used=None,
            kept_mask=np.ones(g.m, dtype=bool),
        )
        return g, fit, thr, report
    pruned, report = prune_at(g, curv.values, thr.beta)
    return pruned, fit, thr, report
