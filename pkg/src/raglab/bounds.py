"""Indistinguishability bounds evaluated at finite size.

Nothing here decides "indistinguishable": unknown universal constants are kept
symbolic and only constant-free quantities or hypothesis ratios are reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fourier
from .fourier import FourierLevels, GammaProfile

LN2 = math.log(2.0)


def pinsker(kl: float) -> float:
    if kl < 0:
        raise ValueError("KL divergence must be nonnegative")
    return min(1.0, math.sqrt(kl / 2))


@dataclass(frozen=True)
class KLBoundResult:
    n: int
    p: float
    per_k_terms: tuple
    total: float
    tv_bound: float


def _shifted(gamma: GammaProfile, p, q) -> GammaProfile:
    """Re-centre ``gamma`` (taken at its own mean ``q``) at density ``p``: adds ``(q-p)^2``."""
    if gamma.has_exact:
        qe, pe = Fraction(q), Fraction(p)
        shift = (qe - pe) ** 2 - (qe - Fraction(gamma.p)) ** 2
        ev = tuple(v + shift for v in gamma.exact_values)
        return GammaProfile(gamma.d, float(p), np.array([float(v) for v in ev]), gamma.log_probs,
                            ev, gamma.exact_probs)
    shift = (q - p) ** 2 - (q - gamma.p) ** 2
    return GammaProfile(gamma.d, float(p), gamma.values + shift, gamma.log_probs)


def kl_bound_exact(gamma: GammaProfile, n: int, p=None, q_mean=None, exact: bool | None = None) -> KLBoundResult:
    """``sum_{k<n} log E[(1 + gamma_p / (p(1-p)))^k]`` via the binomial expansion in the
    moments of ``gamma_p``.

    ``p`` is the Erdos-Renyi density (default: the centring of ``gamma``); ``q_mean``
    is the connection mean when it differs from ``p``.
    """
    p = gamma.p if p is None else p
    if not 0 < float(p) < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    q = gamma.p if q_mean is None else q_mean
    g = gamma if (float(p) == gamma.p and float(q) == gamma.p) else _shifted(gamma, p, q)
    if exact is None:
        exact = g.has_exact and n <= 96
    terms = [0.0]
    if exact:
        pe = Fraction(p) if not isinstance(p, Fraction) else p
        r = 1 / (pe * (1 - pe))
        mom = [Fraction(1)] + [g.moment_exact(t) * r ** t for t in range(1, n)]
        for k in range(1, n):
            s = sum((math.comb(k, t) * mom[t] for t in range(1, k + 1)), Fraction(0))
            terms.append(math.log1p(float(s)))
    else:
        lr = -math.log(float(p) * (1 - float(p)))
        lm = [g.signed_log_moment(t) for t in range(n)]
        for k in range(1, n):
            s = math.fsum(sg * math.exp(math.log(math.comb(k, t)) + l + t * lr)
                          for t, (sg, l) in enumerate(lm[: k + 1]) if t and sg)
            terms.append(math.log1p(s))
    total = math.fsum(terms)
    return KLBoundResult(n, float(p), tuple(terms), total, pinsker(max(total, 0.0)))


@dataclass(frozen=True)
class MainThmTerms:
    n: int
    m: int
    p: float
    L: float
    B_low: tuple          # B_1..B_m
    B_high: tuple         # B_{d-m}..B_d
    C_m: float
    D: float
    bracket: float        # constant-free bracket, times n^3/(p^2(1-p)^2)
    conditions: dict      # ratios that must exceed K_m


def main_thm_terms(levels: FourierLevels, n: int, m: int, p=None) -> MainThmTerms:
    """Constant-free terms of the level-decomposition bound.

    With ``L = d/(2en)``, ``C_m`` sums ``B_i^2`` over ``m+1..floor(L)`` and
    ``ceil(d-L)..d-m-1`` and ``D`` over the levels strictly between, so the two
    partition ``m+1..d-m-1``.  High levels enter as ``B_{d-i}^4 / d^i``.
    """
    d = levels.d
    if 2 * m >= d:
        raise ValueError("need m < d/2")
    p = levels.mean if p is None else float(p)
    pq = p * (1 - p)
    B = np.asarray(levels.level_maxabs, dtype=float)
    L = d / (2 * math.e * n)
    lo_end = min(math.floor(L), d - m - 1)
    hi_start = max(math.ceil(d - L), lo_end + 1)
    low = [i for i in range(m + 1, lo_end + 1)]
    high = [i for i in range(max(hi_start, m + 1), d - m)]
    mid = [i for i in range(max(lo_end + 1, m + 1), min(hi_start, d - m))]
    C = float(np.sum(B[low] ** 2) + np.sum(B[high] ** 2))
    D = float(np.sum(B[mid] ** 2))
    s = math.fsum(B[i] ** 4 / d ** i for i in range(1, m + 1))
    s += math.fsum(B[d - i] ** 4 / d ** i for i in range(0, m + 1))
    s += C * C / d ** (m + 1) + D * D * math.exp(-L)
    scale = n ** 3 / (pq * pq) if pq > 0 else math.inf
    bracket = scale * s if s > 0 else 0.0

    def ratio(x, e):
        return math.inf if x <= 0 or pq == 0 else d / (n * (x / pq) ** e)

    cond = {"d_over_n": d / n, "C_m": ratio(C, 2 / (m + 1))}
    for u in range(2, m + 1):
        cond[f"B_{u}"] = ratio(B[u] ** 2, 2 / u)
        cond[f"B_d-{u}"] = ratio(B[d - u] ** 2, 2 / u)
    return MainThmTerms(n, m, p, L, tuple(B[1:m + 1].tolist()), tuple(B[d - m:].tolist()),
                        C, D, bracket, cond)


@dataclass(frozen=True)
class EntropyThreshold:
    n: int
    p: float
    bits: float
    nats: float


def entropy_threshold(n: int, p: float) -> EntropyThreshold:
    """``n H(p)``: the scale of ``log |Omega|`` (up to an unknown constant) below which
    a {0,1}-valued latent model is detectable."""
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    h = -(p * math.log(p) + (1 - p) * math.log1p(-p))
    return EntropyThreshold(n, p, n * h / LN2, n * h)


def symmetrized_profile(levels: FourierLevels) -> GammaProfile:
    """Dominating symmetric function ``f = sum_{S != {}} B_|S|^2 / C(d,|S|) w_S``.

    ``E[gamma^k] <= E[f^k]``; for symmetric connections ``f`` equals ``gamma``.
    """
    d = levels.d
    if levels.exact_coeffs is not None and d <= 64:
        return fourier.gamma_profile(levels, exact=True)
    w = np.asarray(levels.level_maxabs, dtype=float) ** 2
    kt = fourier.normalized_krawtchouk(d)
    vals = w[1:] @ kt[1:]
    return GammaProfile(d, levels.mean, vals, fourier.binom_log_probs(d))
