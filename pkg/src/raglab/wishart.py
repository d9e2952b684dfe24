"""Random-matrix ensembles and sign graphs.

Gaussian variates come from ``Generator.standard_normal`` (numpy's ziggurat
sampler on a PCG64 stream), drawn in a fixed order: ``X`` first, then ``Y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import GraphSample
from .rng import run_trials
from .stats import tau3, tau4

KINDS = ("wishart", "wishart_diff", "goe", "scaled_goe_identity")


@dataclass(eq=False)
class EnsembleSample:
    kind: str
    n: int
    d: int
    matrix: np.ndarray


def sample_goe(n: int, rng: np.random.Generator) -> np.ndarray:
    """``(Z + Z^T)/sqrt 2``: diagonal variance 2, off-diagonal variance 1."""
    z = rng.standard_normal((n, n))
    return (z + z.T) / math.sqrt(2.0)


def sample_ensemble(kind: str, n: int, d: int, rng: np.random.Generator,
                    identity_scale: float | None = None) -> EnsembleSample:
    """``wishart``: ``X X^T``; ``wishart_diff``: ``X X^T - Y Y^T`` with ``X, Y`` of shape
    ``(n, d)``; ``goe``: ``M(n)``; ``scaled_goe_identity``: ``sqrt(d) M(n) + c I`` with
    ``c = d`` unless ``identity_scale`` is given (``c = d`` matches the Wishart mean)."""
    if n < 1 or (kind != "goe" and d < 1):
        raise ValueError("need n, d >= 1")
    if kind == "wishart":
        x = rng.standard_normal((n, d))
        m = x @ x.T
    elif kind == "wishart_diff":
        x = rng.standard_normal((n, d))
        y = rng.standard_normal((n, d))
        m = x @ x.T - y @ y.T
    elif kind == "goe":
        m = sample_goe(n, rng)
    elif kind == "scaled_goe_identity":
        c = d if identity_scale is None else identity_scale
        m = math.sqrt(d) * sample_goe(n, rng) + c * np.eye(n)
    else:
        raise ValueError(f"unknown ensemble {kind!r}; choose from {KINDS}")
    m = (m + m.T) / 2          # exact symmetry after floating-point products
    return EnsembleSample(kind, n, d, m)


def sign_graph(M) -> GraphSample:
    """Edge ``{i, j}`` iff ``M_ij >= 0``; zeros count as edges."""
    m = M.matrix if isinstance(M, EnsembleSample) else np.asarray(M, dtype=float)
    if not np.array_equal(m, m.T):
        raise ValueError("sign_graph needs a symmetric matrix")
    a = m >= 0
    np.fill_diagonal(a, False)
    tag = {"law": "sign", "kind": M.kind, "n": M.n, "d": M.d} if isinstance(M, EnsembleSample) else {"law": "sign"}
    return GraphSample.from_adjacency(a, 0.5, tag)


def gaussian_twisted_rgg(n: int, d1: int, rng: np.random.Generator, keep_latents: bool = False) -> GraphSample:
    """Latent ``v_i = (x_i, y_i)`` with ``x_i, y_i ~ N(0, I_{d1})``; edge iff
    ``<x_i, x_j> - <y_i, y_j> >= 0``.  Uses the same draws as ``wishart_diff``."""
    x = rng.standard_normal((n, d1))
    y = rng.standard_normal((n, d1))
    v = np.hstack([x, y])
    xs, ys = v[:, :d1], v[:, d1:]
    w = xs @ xs.T - ys @ ys.T
    w = (w + w.T) / 2
    a = w >= 0
    np.fill_diagonal(a, False)
    return GraphSample.from_adjacency(a, 0.5, {"law": "gaussian-twist", "n": n, "d1": d1},
                                      v if keep_latents else None)


def rotation_check(x: np.ndarray, y: np.ndarray, tol: float = 1e-9) -> float:
    """With ``V = (X - Y; X + Y)/sqrt 2``, the lower-left block ``P`` of ``V V^T`` equals
    ``(X+Y)(X-Y)^T / 2`` and ``P + P^T = X X^T - Y Y^T``.  Returns the largest relative
    deviation and raises if it exceeds ``tol``."""
    n = x.shape[0]
    v = np.vstack([x - y, x + y]) / math.sqrt(2.0)
    block = (v @ v.T)[n:, :n]
    w = x @ x.T - y @ y.T
    scale = max(1.0, float(np.abs(w).max()))
    err = max(float(np.abs(block - (x + y) @ (x - y).T / 2).max()),
              float(np.abs(block + block.T - w).max())) / scale
    if err > tol:
        raise AssertionError(f"rotation identity violated: {err:.3e}")
    return err


@dataclass(frozen=True)
class _SignTrial:
    kind: str
    n: int
    d: int
    stat: str = "tau4"

    def __call__(self, rng):
        g = sign_graph(sample_ensemble(self.kind, self.n, self.d, rng))
        return tau4(g, 0.5).value if self.stat == "tau4" else tau3(g, 0.5).value


@dataclass
class TransitionReport:
    n: int
    d_grid: tuple
    trials: int
    means: tuple
    ses: tuple
    ci95: tuple
    goe_mean: float
    goe_se: float
    slope: float
    slope_se: float
    ratios: tuple

    def to_json(self) -> dict:
        return {"n": self.n, "d_grid": list(self.d_grid), "trials": self.trials,
                "means": list(self.means), "ses": list(self.ses), "ci95": [list(c) for c in self.ci95],
                "goe_mean": self.goe_mean, "goe_se": self.goe_se, "slope": self.slope,
                "slope_se": self.slope_se, "ratios": list(self.ratios)}


def fit_loglog_slope(ds, means, ses=None) -> tuple[float, float]:
    """Least-squares slope of ``log mean`` on ``log d`` and its delta-method standard error."""
    ds = np.asarray(ds, dtype=float)
    means = np.asarray(means, dtype=float)
    if np.any(means <= 0):
        return math.nan, math.nan
    lx, ly = np.log(ds), np.log(means)
    xc = lx - lx.mean()
    slope = float(np.sum(xc * (ly - ly.mean())) / np.sum(xc * xc))
    if ses is None:
        return slope, math.nan
    sig = np.asarray(ses, dtype=float) / means
    return slope, float(math.sqrt(np.sum((xc / np.sum(xc * xc)) ** 2 * sig ** 2)))


def wishart_transition_experiment(n: int, d_grid, trials: int, seed: int, workers: int = 1,
                                  goe_trials: int | None = None) -> TransitionReport:
    """Mean signed 4-cycle count of sign graphs of ``W(n, d, -d)`` across ``d`` (stream key
    ``(i, t)`` for the ``i``-th grid point) plus a GOE baseline (key ``(len(grid), t)``)."""
    d_grid = tuple(int(d) for d in d_grid)
    means, ses, cis = [], [], []
    for i, d in enumerate(d_grid):
        v = np.array(run_trials(_SignTrial("wishart_diff", n, d), seed, (i,), trials, workers))
        m, se = float(v.mean()), float(v.std(ddof=1) / math.sqrt(trials))
        means.append(m)
        ses.append(se)
        cis.append((m - 1.96 * se, m + 1.96 * se))
    gt = goe_trials or trials
    g = np.array(run_trials(_SignTrial("goe", n, 0), seed, (len(d_grid),), gt, workers))
    slope, slope_se = fit_loglog_slope(d_grid, means, ses)
    ratios = tuple(means[i] / means[i + 1] if means[i + 1] != 0 else math.inf
                   for i in range(len(means) - 1))
    return TransitionReport(n, d_grid, trials, tuple(means), tuple(ses), tuple(cis),
                            float(g.mean()), float(g.std(ddof=1) / math.sqrt(gt)), slope, slope_se, ratios)
