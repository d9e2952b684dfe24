"""Exact Boolean-Fourier quantities for connections on the hypercube.

For a symmetric function with class values ``g_w`` (``w`` = number of -1
coordinates) every coefficient on a level ``l`` is the same number

    c_l = 2^-d * sum_w g_w * K_w(l),

where ``K_l(w)`` is the Krawtchouk value, i.e. the elementary symmetric
character sum ``e_l`` at a point of class ``w``.  Krawtchouk values are exact
integers; every coefficient below is accumulated in integer arithmetic over a
common denominator, so the rational path is exact for any ``d`` and floats are
only produced by correctly rounded big-integer division.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

EXHAUSTIVE_MAX_D = 24
TABLE_CACHE_MAX_D = 512


# -- Krawtchouk values ------------------------------------------------------------------

def krawtchouk(d: int, l: int, w: int) -> int:
    """``K_l(w) = sum_j (-1)^j C(w,j) C(d-w, l-j)``."""
    if not (0 <= l <= d and 0 <= w <= d):
        raise ValueError(f"krawtchouk indices out of range: d={d}, l={l}, w={w}")
    return sum((-1) ** j * math.comb(w, j) * math.comb(d - w, l - j)
               for j in range(max(0, l - (d - w)), min(w, l) + 1))


def krawtchouk_rows(d: int, upto: int | None = None) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(l, row)`` with ``row[w] = K_l(w)`` for ``w = 0..d`` as an object array.

    Uses the three-term recurrence in the degree,
    ``(l+1) K_{l+1}(w) = (d-2w) K_l(w) - (d-l+1) K_{l-1}(w)``, whose division is exact.
    """
    upto = d if upto is None else upto
    w = np.array([int(v) for v in range(d + 1)], dtype=object)
    lin = d - 2 * w
    prev = np.ones(d + 1, dtype=object)
    yield 0, prev
    if upto < 1:
        return
    cur = lin.copy()
    yield 1, cur
    for l in range(1, upto):
        nxt = (lin * cur - (d - l + 1) * prev) // (l + 1)
        prev, cur = cur, nxt
        yield l + 1, cur


@lru_cache(maxsize=16)
def krawtchouk_table(d: int) -> np.ndarray:
    """Read-only ``(d+1, d+1)`` object array ``T[l, w] = K_l(w)``."""
    if d > TABLE_CACHE_MAX_D:
        raise ValueError(f"refusing to tabulate Krawtchouk values for d={d} > {TABLE_CACHE_MAX_D}")
    t = np.empty((d + 1, d + 1), dtype=object)
    for l, row in krawtchouk_rows(d):
        t[l] = row
    t.setflags(write=False)
    return t


@lru_cache(maxsize=8)
def normalized_krawtchouk(d: int) -> np.ndarray:
    """Float matrix ``K_l(w) / C(d,l)``; entries lie in [-1, 1]."""
    out = np.empty((d + 1, d + 1))
    for l, row in krawtchouk_rows(d):
        out[l] = (row / math.comb(d, l)).astype(float)
    out.setflags(write=False)
    return out


def binom_log_probs(d: int) -> np.ndarray:
    w = np.arange(d + 1)
    return gammaln(d + 1) - gammaln(w + 1) - gammaln(d - w + 1) - d * math.log(2.0)


# -- profiles and levels ----------------------------------------------------------------

def profile_values(profile) -> list:
    """Values ``f_0..f_d`` (indexed by the number of +1 coordinates)."""
    vals = getattr(profile, "values", profile)
    return list(vals)


def _as_fractions(vals) -> list[Fraction]:
    out = []
    for v in vals:
        if isinstance(v, Fraction):
            out.append(v)
        elif isinstance(v, (int, np.integer)):
            out.append(Fraction(int(v)))
        else:
            out.append(Fraction(float(v)))
    return out


def _common_denominator(fr: Sequence[Fraction]) -> int:
    den = 1
    for x in fr:
        den = math.lcm(den, x.denominator)
    return den


@dataclass(frozen=True)
class FourierLevels:
    """Per-level Fourier data.

    ``coeffs`` holds the common level value ``c_l`` and is only present for
    symmetric functions; ``spectrum`` holds every ``f^(S)`` (indexed by the bit
    mask of ``S``) when the data came from an exhaustive transform.
    """
    d: int
    weights: np.ndarray
    level_maxabs: np.ndarray
    coeffs: np.ndarray | None = None
    exact_coeffs: tuple | None = field(default=None, repr=False)
    spectrum: np.ndarray | None = field(default=None, repr=False)
    power_sums: dict | None = field(default=None, repr=False)
    c0: float | None = None

    @property
    def mean(self) -> float:
        if self.exact_coeffs is not None:
            return float(self.exact_coeffs[0])
        if self.coeffs is not None:
            return float(self.coeffs[0])
        if self.spectrum is not None:
            return float(self.spectrum[0])
        return float(self.c0)

    @property
    def exact_weights(self) -> tuple:
        if self.exact_coeffs is None:
            raise ValueError("no exact coefficients available")
        return tuple(math.comb(self.d, l) * c * c for l, c in enumerate(self.exact_coeffs))

    @property
    def variance(self) -> float:
        return float(np.sum(self.weights[1:]))

    def power_sum(self, k: int) -> float:
        """``sum_{S != {}} f^(S)^k``."""
        if self.exact_coeffs is not None:
            return float(self.exact_power_sum(k))
        if self.spectrum is not None:
            return float(np.sum(self.spectrum[1:] ** k))
        if self.power_sums and k in self.power_sums:
            return float(self.power_sums[k])
        raise ValueError(f"power sum of order {k} not available for these levels")

    def exact_power_sum(self, k: int) -> Fraction:
        if self.exact_coeffs is None:
            raise ValueError("no exact coefficients available")
        return sum((math.comb(self.d, l) * c ** k for l, c in enumerate(self.exact_coeffs) if l),
                   Fraction(0))


def levels_from_profile(profile) -> FourierLevels:
    """Exact level coefficients of a symmetric function given as ``f_0..f_d``."""
    vals = profile_values(profile)
    d = len(vals) - 1
    g = _as_fractions(vals[::-1])           # g_w = f_{d-w}
    den = _common_denominator(g)
    num = [int(x * den) for x in g]
    acc = np.zeros(d + 1, dtype=object)
    acc[:] = 0
    for w, row in krawtchouk_rows(d):       # row[l] = K_w(l)
        if num[w]:
            acc += num[w] * row
    scale = den << d
    exact = tuple(Fraction(int(a), scale) for a in acc)
    return _levels_from_exact(d, exact)


def _levels_from_exact(d: int, exact: tuple) -> FourierLevels:
    coeffs = np.array([float(c) for c in exact])
    weights = np.array([float(math.comb(d, l) * c * c) for l, c in enumerate(exact)])
    maxabs = np.array([math.sqrt(wt) for wt in weights])
    return FourierLevels(d=d, weights=weights, level_maxabs=maxabs, coeffs=coeffs,
                         exact_coeffs=exact)


def profile_from_levels(d: int, coeffs: Sequence) -> list:
    """Inverse of :func:`levels_from_profile`: ``f_{d-w} = sum_l c_l K_l(w)``.

    Exact when the coefficients are rationals.
    """
    fr = _as_fractions(coeffs)
    den = _common_denominator(fr)
    num = [int(c * den) for c in fr]
    acc = np.zeros(d + 1, dtype=object)
    acc[:] = 0
    for l, row in krawtchouk_rows(d):
        if num[l]:
            acc += num[l] * row
    g = [Fraction(int(a), den) for a in acc]
    return g[::-1]


def last_level_via_differences(profile, exact: bool = False):
    """``f^([d])`` from consecutive differences of the profile:

    ``2^-d * sum_{j=1..d} (f_j - f_{j-1}) (-1)^(d-j) C(d-1, j-1)``.
    """
    f = _as_fractions(profile_values(profile))
    d = len(f) - 1
    tot = sum(((f[j] - f[j - 1]) * (-1) ** (d - j) * math.comb(d - 1, j - 1)
               for j in range(1, d + 1)), Fraction(0))
    val = tot / (1 << d)
    return val if exact else float(val)


# -- exhaustive transform ---------------------------------------------------------------

def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis (length ``2^d``)."""
    a = np.array(values, dtype=float, copy=True)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        a = a.reshape(a.shape[:-1] + (n // (2 * h), 2, h))
        x = a[..., 0, :].copy()
        y = a[..., 1, :]
        a[..., 0, :] += y
        a[..., 1, :] = x - y
        a = a.reshape(a.shape[:-3] + (n,))
        h *= 2
    return a


def popcounts(d: int) -> np.ndarray:
    return np.bitwise_count(np.arange(2 ** d, dtype=np.uint64)).astype(np.int64)


def levels_from_table(table: np.ndarray) -> FourierLevels:
    """Levels of an arbitrary function given by its ``2^d`` values (index = bit mask of -1s)."""
    table = np.asarray(table, dtype=float)
    d = int(round(math.log2(table.size)))
    if 2 ** d != table.size or d > EXHAUSTIVE_MAX_D:
        raise ValueError("table must have 2^d entries with d <= 24")
    spec = fwht(table) / 2 ** d
    pc = popcounts(d)
    weights = np.bincount(pc, weights=spec ** 2, minlength=d + 1)
    maxabs = np.zeros(d + 1)
    np.maximum.at(maxabs, pc, np.abs(spec))
    binoms = np.array([math.comb(d, l) for l in range(d + 1)], dtype=float)
    return FourierLevels(d=d, weights=weights, level_maxabs=maxabs * np.sqrt(binoms),
                         spectrum=spec)


def brute_force_coefficient(table: np.ndarray, S: int) -> float:
    """``E[f * w_S]`` by direct enumeration (oracle)."""
    table = np.asarray(table, dtype=float)
    idx = np.arange(table.size, dtype=np.uint64)
    chars = 1 - 2 * (np.bitwise_count(idx & np.uint64(S)) & 1).astype(float)
    return float(np.mean(table * chars))


def symmetric_table(profile) -> np.ndarray:
    """Expand a profile to its ``2^d`` table."""
    vals = np.array([float(v) for v in profile_values(profile)])
    d = len(vals) - 1
    return vals[d - popcounts(d)]


# -- autocorrelation --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaProfile:
    """Distribution of the autocorrelation ``gamma`` under a uniform group element.

    ``values[i]`` is taken with probability ``exp(log_probs[i])``.  For symmetric
    connections entry ``w`` is the Hamming class ``w``; exhaustive profiles list
    every point.
    """
    d: int
    p: float
    values: np.ndarray
    log_probs: np.ndarray
    exact_values: tuple | None = field(default=None, repr=False)
    exact_probs: tuple | None = field(default=None, repr=False)
    moment_cache: dict = field(default_factory=dict, repr=False)

    @property
    def gamma_values(self) -> np.ndarray:
        return self.values

    @property
    def has_exact(self) -> bool:
        return self.exact_values is not None

    def signed_log_moment(self, t: int) -> tuple[float, float]:
        """``(sign, log|E[gamma^t]|)`` computed by a signed log-sum-exp."""
        if t == 0:
            return 1.0, 0.0
        v = self.values
        nz = v != 0
        la = self.log_probs[nz] + t * np.log(np.abs(v[nz]))
        neg = (v[nz] < 0) & (t % 2 == 1)
        lp = logsumexp(la[~neg]) if np.any(~neg) else -np.inf
        ln = logsumexp(la[neg]) if np.any(neg) else -np.inf
        if lp == ln:
            return 0.0, -np.inf
        if lp > ln:
            return 1.0, lp + np.log1p(-np.exp(ln - lp))
        return -1.0, ln + np.log1p(-np.exp(lp - ln))

    def moment(self, t: int) -> float:
        if t not in self.moment_cache:
            s, lm = self.signed_log_moment(t)
            self.moment_cache[t] = s * math.exp(lm) if s else 0.0
        return self.moment_cache[t]

    def moments(self, t_max: int) -> np.ndarray:
        return np.array([self.moment(t) for t in range(1, t_max + 1)])

    def moment_exact(self, t: int) -> Fraction:
        if not self.has_exact:
            raise ValueError("no exact gamma values available")
        key = ("exact", t)
        if key not in self.moment_cache:
            self.moment_cache[key] = sum((q * v ** t for q, v in zip(self.exact_probs, self.exact_values)),
                                         Fraction(0))
        return self.moment_cache[key]


def gamma_profile(levels: FourierLevels, p=None, exact: bool | None = None) -> GammaProfile:
    """Autocorrelation ``gamma_p = (sigma - p) * (sigma - p)`` by class.

    ``gamma_w = sum_{l>=1} c_l^2 K_l(w) + (c_0 - p)^2``.  ``p`` defaults to the
    connection's own mean.  The exact path is used by default for ``d <= 64``.
    """
    d = levels.d
    if levels.spectrum is not None and levels.coeffs is None:
        return _gamma_from_spectrum(levels, p)
    c0 = levels.exact_coeffs[0]
    pe = c0 if p is None else (p if isinstance(p, Fraction) else Fraction(p))
    shift = (c0 - pe) ** 2
    if exact is None:
        exact = d <= 64
    if exact:
        sq = [c * c for c in levels.exact_coeffs]
        den = _common_denominator(sq)
        num = [int(c * den) for c in sq]
        acc = np.zeros(d + 1, dtype=object)
        acc[:] = 0
        for l, row in krawtchouk_rows(d):
            if l and num[l]:
                acc += num[l] * row
        ev = tuple(Fraction(int(a), den) + shift for a in acc)
        probs = tuple(Fraction(math.comb(d, w), 1 << d) for w in range(d + 1))
        vals = np.array([float(x) for x in ev])
        return GammaProfile(d, float(pe), vals, binom_log_probs(d), ev, probs)
    kt = normalized_krawtchouk(d)
    vals = levels.weights[1:] @ kt[1:] + float(shift)
    return GammaProfile(d, float(pe), vals, binom_log_probs(d))


def _gamma_from_spectrum(levels: FourierLevels, p=None) -> GammaProfile:
    d = levels.d
    spec = levels.spectrum
    pe = spec[0] if p is None else float(p)
    gh = spec ** 2
    gh[0] = (spec[0] - pe) ** 2
    vals = fwht(gh)
    log_probs = np.full(vals.size, -d * math.log(2.0))
    return GammaProfile(d, float(pe), vals, log_probs)


# -- elementary symmetric moments -------------------------------------------------------

def elem_sym_log_moment(d: int, s: int, t) -> float:
    """``log ||e_s||_t`` from the exact Krawtchouk sum ``2^-d sum_w C(d,w) |K_s(w)|^t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if not 0 <= s <= d:
        raise ValueError("s out of range")
    row = None
    for l, r in krawtchouk_rows(d, upto=s):
        if l == s:
            row = r
    if float(t).is_integer():
        t = int(t)
        tot = sum(math.comb(d, w) * abs(int(k)) ** t for w, k in enumerate(row))
        return (math.log(tot) - d * math.log(2.0)) / t
    terms = [math.log(math.comb(d, w)) + t * math.log(abs(int(k)))
             for w, k in enumerate(row) if k != 0]
    return (float(logsumexp(terms)) - d * math.log(2.0)) / t


def elem_sym_moment(d: int, s: int, t) -> float:
    """``E[|e_s|^t]^(1/t)``; may overflow to inf for huge ``d``, use the log form then."""
    return math.exp(elem_sym_log_moment(d, s, t))


@dataclass(frozen=True)
class ElemSymBounds:
    """Log-values of the bounds on ``||e_s||_t``; ``log_upper_mid`` is None when its
    hypothesis fails and ``mid_note`` says which condition failed."""
    d: int
    s: int
    t: float
    log_upper_hc: float
    log_upper_mid: float | None
    log_lower: float
    mid_note: str


def elem_sym_bounds(d: int, s: int, t) -> ElemSymBounds:
    sm = min(s, d - s)
    lc = math.log(math.comb(d, s))
    # hypercontractivity needs t >= 2; below that ||e_s||_t <= ||e_s||_2
    hc = 0.5 * lc + (0.5 * sm * math.log(t - 1) if t >= 2 else 0.0)
    lower = lc - d * math.log(2.0) / t
    mid, note = None, "ok"
    if not t > 1:
        note = "requires t > 1"
    elif not d > 2 * t * math.e:
        note = "requires d > 2te"
    elif not sm >= d / (2 * t * math.e):
        note = "requires sm(s) >= d/(2te)"
    else:
        mid = lc - d / (4 * t * math.e)
    return ElemSymBounds(d, s, t, hc, mid, lower, note)


# -- level-k inequality -----------------------------------------------------------------

@dataclass(frozen=True)
class LevelKReport:
    k: int
    alpha: float
    applicable: bool
    low_weight: float
    high_weight: float
    bound: float
    holds: bool | None


def level_k_inequality_check(levels: FourierLevels, k: int, alpha: float | None = None) -> LevelKReport:
    """Compare ``W^{<=k}`` and ``W^{>=d-k}`` with ``(2e/k ln(1/alpha))^k alpha^2``.

    ``alpha`` defaults to the mean, which equals ``||f||_1`` for [0,1]-valued f.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a = levels.mean if alpha is None else float(alpha)
    low = float(np.sum(levels.weights[: k + 1]))
    high = float(np.sum(levels.weights[max(0, levels.d - k):]))
    if a <= 0 or a >= 1 or k > 2 * math.log(1 / a):
        return LevelKReport(k, a, False, low, high, math.nan, None)
    bound = (2 * math.e / k * math.log(1 / a)) ** k * a * a
    tol = 1e-12
    return LevelKReport(k, a, True, low, high, bound, bool(low <= bound + tol and high <= bound + tol))


# -- tabular output ---------------------------------------------------------------------

def levels_rows(levels: FourierLevels) -> list[tuple]:
    coeffs = levels.coeffs if levels.coeffs is not None else [math.nan] * (levels.d + 1)
    return [(l, float(coeffs[l]), float(levels.weights[l]), float(levels.level_maxabs[l]))
            for l in range(levels.d + 1)]


def moment_rows(gamma: GammaProfile, t_max: int) -> list[tuple]:
    if gamma.has_exact:
        return [(t, float(gamma.moment_exact(t))) for t in range(1, t_max + 1)]
    return [(t, gamma.moment(t)) for t in range(1, t_max + 1)]
