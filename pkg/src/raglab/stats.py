"""Detection statistics: signed cycle counts, Walsh statistics, the
neighbourhood-identical scan, and a two-sample power harness.

Cycles are unordered: a triangle is counted once, a 4-cycle once (there are
``C(n,3)`` and ``3 C(n,4)`` of them in ``K_n``).  The ordered convention
multiplies every count by ``2k``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fourier
from .graphs import GraphSample
from .rng import run_trials

WALSH_K_MAX = 8


@dataclass(frozen=True)
class CycleStatResult:
    k: int
    value: float
    n: int
    p: float
    exact: Fraction | None = None


def _adj(G) -> np.ndarray:
    return G.adjacency() if isinstance(G, GraphSample) else np.asarray(G, dtype=bool)


def _centered(A: np.ndarray, p: float) -> np.ndarray:
    B = A.astype(float) - p
    np.fill_diagonal(B, 0.0)
    return B


def _scaled_int(A: np.ndarray, p: Fraction) -> tuple[np.ndarray, int]:
    """``b*A - a`` with zero diagonal, where ``p = a/b``; object dtype avoids overflow."""
    a, b = p.numerator, p.denominator
    B = (A.astype(np.int64) * b - a).astype(object)
    np.fill_diagonal(B, 0)
    return B, b


def _cycle_sums(B) -> tuple:
    B2 = B @ B
    t3 = np.sum(B2 * B)                       # tr(B^3) since B is symmetric
    t4 = np.sum(B2 * B2)                      # tr(B^4)
    diag = np.diagonal(B2)
    return t3, t4 - 2 * np.sum(diag * diag) + np.sum((B * B) * (B * B))


def tau3(G, p) -> CycleStatResult:
    """``sum over triangles of (A_ij - p)(A_jk - p)(A_ki - p) = tr(B^3)/6``."""
    A = _adj(G)
    n = A.shape[0]
    if isinstance(p, (Fraction, int)):
        B, b = _scaled_int(A, Fraction(p))
        tr3 = np.sum((B @ B) * B)
        ex = Fraction(int(tr3), 6 * b ** 3)
        return CycleStatResult(3, float(ex), n, float(p), ex)
    B = _centered(A, float(p))
    return CycleStatResult(3, float(np.sum((B @ B) * B) / 6.0), n, float(p))


def tau4(G, p) -> CycleStatResult:
    """Signed 4-cycles: ``[tr B^4 - 2 sum_i ((B^2)_ii)^2 + sum_ij B_ij^4] / 8``."""
    A = _adj(G)
    n = A.shape[0]
    if isinstance(p, (Fraction, int)):
        B, b = _scaled_int(A, Fraction(p))
        _, s4 = _cycle_sums(B)
        ex = Fraction(int(s4), 8 * b ** 4)
        return CycleStatResult(4, float(ex), n, float(p), ex)
    B = _centered(A, float(p))
    _, s4 = _cycle_sums(B)
    return CycleStatResult(4, float(s4) / 8.0, n, float(p))


def triangle_count(G) -> int:
    A = _adj(G).astype(np.int64)
    return int(np.sum((A @ A) * A)) // 6


def cycle_count(n: int, k: int) -> int:
    """Number of unordered simple k-cycles in K_n (k = 3, 4)."""
    if k == 3:
        return math.comb(n, 3)
    if k == 4:
        return 3 * math.comb(n, 4)
    raise ValueError("only k = 3, 4 supported")


def expected_tau_fourier(levels: fourier.FourierLevels, n: int, k: int) -> float:
    """``(#k-cycles) * sum_{S != {}} f^(S)^k``."""
    return cycle_count(n, k) * levels.power_sum(k)


def _levels_is_indicator(levels: fourier.FourierLevels) -> bool | None:
    if levels.exact_coeffs is not None:
        vals = fourier.profile_from_levels(levels.d, levels.exact_coeffs)
        return all(v in (0, 1) for v in vals)
    if levels.spectrum is not None:
        vals = fourier.fwht(levels.spectrum)
        return bool(np.all((np.abs(vals) < 1e-9) | (np.abs(vals - 1) < 1e-9)))
    return None


def variance_tau3_fourier(levels: fourier.FourierLevels, n: int, p=None) -> float:
    """Upper-bound form of ``Var[tau3]`` under the RAG for a {0,1}-valued connection:

    ``C(n,3) [(p-p^2)^3 + (1-2p)^3 S3 - S3^2] + 3 (n-3) C(n,3) S4``

    with ``S_k = sum_{S != {}} f^(S)^k``; triangle pairs sharing one vertex or
    none are uncorrelated, and the shared-edge covariance is bounded by ``S4``.
    """
    if _levels_is_indicator(levels) is not True:
        raise ValueError("variance bound is only established for {0,1}-valued connections")
    p = levels.mean if p is None else float(p)
    s3, s4 = levels.power_sum(3), levels.power_sum(4)
    c = math.comb(n, 3)
    return c * ((p - p * p) ** 3 + (1 - 2 * p) ** 3 * s3 - s3 * s3) + 3 * (n - 3) * c * s4


def variance_tau3_exact(conn, n: int) -> float:
    """Exact ``Var[tau3]`` for a {0,1}-valued hypercube connection centred at its mean.

    The shared-edge covariance is ``E_g[((1-2p) sigma(g) + p^2) gamma(g)^2] - S3^2``.
    """
    levels = conn.fourier_levels()
    if not conn.is_indicator:
        raise ValueError("exact variance formula needs a {0,1}-valued connection")
    p = float(conn.mean_p)
    gam = fourier.gamma_profile(levels, exact=False) if levels.coeffs is not None \
        else fourier.gamma_profile(fourier.levels_from_table(conn.table()))
    if levels.coeffs is not None:
        sig = conn.profile.float_values[::-1]         # by class w
    else:
        sig = conn.table()
    probs = np.exp(gam.log_probs)
    s3 = levels.power_sum(3)
    cov2 = float(np.sum(probs * ((1 - 2 * p) * sig + p * p) * gam.values ** 2)) - s3 * s3
    c = math.comb(n, 3)
    return c * ((p - p * p) ** 3 + (1 - 2 * p) ** 3 * s3 - s3 * s3) + 3 * (n - 3) * c * cov2


def walsh_statistic(G, p: float, H: Sequence[tuple[int, int]], k_max: int = WALSH_K_MAX) -> float:
    """``prod_{(i,j) in H} (A_ij - p) / sqrt(p(1-p))``."""
    A = _adj(G)
    n = A.shape[0]
    if len(H) > k_max:
        raise ValueError(f"|H| = {len(H)} exceeds k_max = {k_max}")
    seen = set()
    for i, j in H:
        e = (min(i, j), max(i, j))
        if i == j or not (0 <= e[0] and e[1] < n) or e in seen:
            raise ValueError(f"H is not a simple edge set on [{n}]: bad edge {(i, j)}")
        seen.add(e)
    s = math.sqrt(p * (1 - p))
    out = 1.0
    for i, j in H:
        out *= (float(A[i, j]) - p) / s
    return out


def neighborhood_identical_scan(G) -> tuple[bool, tuple[int, int] | None]:
    """First pair ``(u, v)`` whose adjacency agrees on every other vertex."""
    R = G.row_words() if isinstance(G, GraphSample) else GraphSample.from_adjacency(G, 0.5).row_words()
    n = R.shape[0]
    one = np.uint64(1)
    for u in range(n - 1):
        X = R[u + 1:] ^ R[u]
        X[:, u // 64] &= ~(one << np.uint64(u % 64))
        v = np.arange(u + 1, n)
        X[np.arange(v.size), v // 64] &= ~(one << (v % 64).astype(np.uint64))
        hit = np.flatnonzero(~X.any(axis=1))
        if hit.size:
            return True, (u, int(v[hit[0]]))
    return False, None


# -- detection harness ------------------------------------------------------------------

@dataclass(frozen=True)
class Statistic:
    """Picklable statistic selector: ``tau3``, ``tau4``, ``walsh`` (with ``H``) or ``neighborhood``."""
    kind: str
    H: tuple = ()

    def __post_init__(self):
        if self.kind not in ("tau3", "tau4", "walsh", "neighborhood"):
            raise ValueError(f"unknown statistic {self.kind!r}")

    def __call__(self, G: GraphSample, p: float) -> float:
        if self.kind == "tau3":
            return tau3(G, p).value
        if self.kind == "tau4":
            return tau4(G, p).value
        if self.kind == "walsh":
            return walsh_statistic(G, p, [tuple(e) for e in self.H])
        return float(neighborhood_identical_scan(G)[0])


@dataclass(frozen=True)
class _Trial:
    model: object
    statistic: Statistic
    p: float

    def __call__(self, rng):
        return self.statistic(self.model.sample(rng), self.p)


@dataclass
class DetectionReport:
    trials: int
    statistic: str
    p: float
    means: tuple
    variances: tuple
    threshold: float
    separation: float
    power: float
    values: tuple = ()

    def to_json(self, include_values: bool = False) -> dict:
        d = asdict(self)
        if not include_values:
            d.pop("values")
        else:
            d["values"] = [list(v) for v in self.values]
        d["means"] = list(self.means)
        d["variances"] = list(self.variances)
        return d

    def csv_rows(self):
        for m, vals in enumerate(self.values):
            for t, v in enumerate(vals):
                yield (t, m, self.statistic, v)


def summarize(a: np.ndarray, b: np.ndarray, statistic: str, p: float) -> DetectionReport:
    ma, mb = float(a.mean()), float(b.mean())
    va = float(a.var(ddof=1)) if a.size > 1 else 0.0
    vb = float(b.var(ddof=1)) if b.size > 1 else 0.0
    thr = (ma + mb) / 2
    if ma >= mb:
        correct = np.sum(a > thr) + np.sum(b <= thr)
    else:
        correct = np.sum(a < thr) + np.sum(b >= thr)
    pooled = math.sqrt((va + vb) / 2)
    gap = abs(ma - mb)
    sep = gap / pooled if pooled > 0 else (math.inf if gap > 0 else 0.0)
    power = float(correct) / (a.size + b.size)
    return DetectionReport(int(a.size), statistic, float(p), (ma, mb), (va, vb), thr, sep, power,
                           (tuple(a.tolist()), tuple(b.tolist())))


def detection_experiment(model_a, model_b, statistic: Statistic | str, trials: int, seed: int,
                         p: float | None = None, workers: int = 1) -> DetectionReport:
    """Run ``trials`` samples of each model (stream keys ``(0, t)`` and ``(1, t)``), put the
    threshold at the midpoint of the two sample means and report the empirical power."""
    if trials < 1:
        raise ValueError("need at least one trial")
    stat = Statistic(statistic) if isinstance(statistic, str) else statistic
    p = float(model_b.p if p is None else p)
    a = np.array(run_trials(_Trial(model_a, stat, p), seed, (0,), trials, workers), dtype=float)
    b = np.array(run_trials(_Trial(model_b, stat, p), seed, (1,), trials, workers), dtype=float)
    return summarize(a, b, stat.kind, p)
