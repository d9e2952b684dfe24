"""Connection functions ``sigma: G -> [0, 1]``.

Symmetric hypercube connections are stored as profiles ``f_0..f_d`` where
``f_i`` is the value at points with exactly ``i`` coordinates equal to +1.
Profiles built from rational data keep exact ``Fraction`` values so that means
and Fourier levels stay exact.  Non-symmetric hypercube connections are value
rules evaluated on packed words; connections over enumerable groups may also be
stored as membership bitsets or value tables.
"""
from __future__ import annotations

import base64
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fourier
from .group import (CYCLIC, ENUMERATION_CAP, HYPERCUBE, GroupSpec, hc_coordinate_mask,
                    hc_from_ints, hc_popcount, orbit_partition)

VALUE_TOL = 1e-9


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


# -- profiles ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricProfile:
    d: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.d + 1:
            raise ValueError(f"profile needs {self.d + 1} values, got {len(self.values)}")
        for v in self.values:
            if not -1e-15 <= float(v) <= 1 + 1e-15:
                raise ValueError(f"profile value {v} outside [0, 1]")

    @classmethod
    def of(cls, values) -> "SymmetricProfile":
        vals = tuple(v if isinstance(v, Fraction) else
                     (Fraction(int(v)) if isinstance(v, (int, np.integer)) else float(v))
                     for v in values)
        return cls(len(vals) - 1, vals)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    @property
    def float_values(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    @cached_property
    def exact_mean(self) -> Fraction:
        fr = [_frac(v) for v in self.values]
        den = math.lcm(*(f.denominator for f in fr))
        num, c = 0, 1                    # c = C(d, i), updated incrementally
        for i, f in enumerate(fr):
            if f:
                num += c * (f.numerator * (den // f.denominator))
            c = c * (self.d - i) // (i + 1)
        return Fraction(num, den << self.d)

    @property
    def achieved_p(self):
        m = self.exact_mean
        return m if self.is_exact else float(m)

    @property
    def is_even(self) -> bool:
        return all(self.values[i] == self.values[self.d - i] for i in range(self.d + 1))


def fluctuation(profile) -> float:
    """``Fl(f) = sum_j |f_{j+1} - f_j|``."""
    vals = profile.values if isinstance(profile, SymmetricProfile) else profile
    fr = [_frac(v) for v in vals]
    return float(sum((abs(b - a) for a, b in zip(fr, fr[1:])), Fraction(0)))


def lipschitz_constant(profile) -> float:
    """Largest change of the profile per unit change of ``sum x_i``."""
    vals = profile.values if isinstance(profile, SymmetricProfile) else profile
    fr = [_frac(v) for v in vals]
    return float(max((abs(b - a) for a, b in zip(fr, fr[1:])), default=Fraction(0)) / 2)


# -- connection classes -----------------------------------------------------------------

def _words_from_idx(idx) -> np.ndarray:
    return np.asarray(idx, dtype=np.int64).astype(np.uint64)[..., None]


def _unpack_signs(words: np.ndarray, d: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")[..., :d]
    return 1.0 - 2.0 * bits


class Connection:
    """Base class.  Subclasses provide ``group``, ``mean_p`` and one evaluator."""
    group: GroupSpec
    form = "general"
    name = "connection"

    @property
    def d(self) -> int:
        return self.group.d

    @property
    def is_indicator(self) -> bool:
        return False

    def evaluate_words(self, words: np.ndarray) -> np.ndarray:
        if self.group.kind != HYPERCUBE or self.group.d > 63:
            raise NotImplementedError
        w = np.atleast_2d(words)
        return self.evaluate_idx(w[:, 0].astype(np.int64))

    def evaluate_idx(self, idx) -> np.ndarray:
        if self.group.kind == HYPERCUBE:
            if self.group.d > 63:
                raise ValueError("index evaluation needs d <= 63; use evaluate_words")
            return self.evaluate_words(_words_from_idx(np.atleast_1d(idx)))
        raise NotImplementedError

    def evaluate(self, g) -> float:
        if self.group.kind == HYPERCUBE:
            return float(self.evaluate_words(hc_from_ints([g], self.group.d))[0])
        if isinstance(g, tuple):
            g = int(self.group.index_of(np.array(g)))
        return float(self.evaluate_idx(np.array([g]))[0])

    def table(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        if self.group.order > cap:
            raise ValueError(f"group order {self.group.order} exceeds enumeration cap")
        return self.evaluate_idx(np.arange(self.group.order, dtype=np.int64))

    def fourier_levels(self) -> fourier.FourierLevels:
        if self.group.kind != HYPERCUBE:
            raise ValueError("Fourier levels are only available on the hypercube")
        return fourier.levels_from_table(self.table())

    def to_json(self) -> dict:
        raise NotImplementedError

    def check_range(self, samples: int = 100_000, rng=None) -> bool:
        """Values lie in [0,1]: exhaustive when enumerable, sampled otherwise."""
        if self.group.order <= 2 ** 20:
            v = self.table()
        else:
            from .group import hc_random
            rng = rng or np.random.default_rng(0)
            v = self.evaluate_words(hc_random(rng, samples, self.group.d))
        return bool(np.all(v >= -1e-12) and np.all(v <= 1 + 1e-12))


class SymmetricConnection(Connection):
    form = "symmetric"

    def __init__(self, profile: SymmetricProfile, name: str = "profile", params: dict | None = None):
        self.profile = profile
        self.group = GroupSpec.hypercube(profile.d)
        self.name = name
        self.params = dict(params or {})
        self._vals = profile.float_values

    @property
    def mean_p(self):
        return self.profile.achieved_p

    @property
    def is_indicator(self) -> bool:
        return all(v in (0, 1) for v in self.profile.values)

    def evaluate_words(self, words):
        w = hc_popcount(np.atleast_2d(words))
        return self._vals[self.profile.d - w]

    def fourier_levels(self):
        return fourier.levels_from_profile(self.profile)

    def to_json(self):
        return {"type": "symmetric", "d": self.profile.d,
                "params": {"name": self.name, "values": [_json_num(v) for v in self.profile.values],
                           **self.params}}

    def __getstate__(self):
        return self.__dict__

    def __setstate__(self, st):
        self.__dict__.update(st)


class ContractedConnection(Connection):
    """``sigma_alpha``: coefficient ``f^(S)`` becomes ``f^(S) * prod_{i in S} alpha_i``.

    For sign vectors this is ``sigma(alpha x)``, evaluated by XOR with a mask.
    """

    def __init__(self, base: SymmetricConnection, alpha, name: str = "contraction"):
        alpha = np.asarray(alpha, dtype=float)
        d = base.profile.d
        if alpha.shape != (d,) or np.any(np.abs(alpha) > 1):
            raise ValueError("alpha must be a length-d vector in [-1,1]")
        self.base = base
        self.alpha = alpha
        self.group = base.group
        self.name = name
        self.signs = bool(np.all(np.abs(alpha) == 1))
        self._mask = hc_coordinate_mask(d, np.flatnonzero(alpha < 0))
        self._levels = base.fourier_levels()

    @property
    def mean_p(self):
        return self.base.mean_p

    def evaluate_words(self, words):
        words = np.atleast_2d(words)
        if self.signs:
            return self.base.evaluate_words(words ^ self._mask)
        v = _unpack_signs(words, self.d) * self.alpha
        e = np.zeros((v.shape[0], self.d + 1))
        e[:, 0] = 1.0
        for i in range(self.d):
            e[:, 1:] = e[:, 1:] + v[:, i:i + 1] * e[:, :-1]
        out = e @ self._levels.coeffs
        if np.any(out < -VALUE_TOL) or np.any(out > 1 + VALUE_TOL):
            raise ValueError("contracted connection leaves [0,1]")
        return np.clip(out, 0.0, 1.0)

    def fourier_levels(self):
        """Levels without materialising ``2^d`` values.

        ``W_l = c_l^2 e_l(alpha^2)``, ``B_l = |c_l| * (product of the l largest |alpha_i|) * C(d,l)^(1/2)``
        and power sums ``sum_l c_l^k e_l(alpha^k)``.
        """
        d = self.d
        c = self._levels.exact_coeffs
        a = [_frac(x) for x in self.alpha]
        sq = _elem_sym_all([x * x for x in a])
        top = sorted((abs(x) for x in a), reverse=True)
        prods = [Fraction(1)]
        for x in top:
            prods.append(prods[-1] * x)
        weights = np.array([float(c[l] ** 2 * sq[l]) for l in range(d + 1)])
        maxabs = np.array([float(abs(c[l]) * prods[l]) * math.sqrt(math.comb(d, l)) for l in range(d + 1)])
        ps = {}
        for k in range(1, 9):
            ek = _elem_sym_all([x ** k for x in a])
            ps[k] = float(sum((c[l] ** k * ek[l] for l in range(1, d + 1)), Fraction(0)))
        return fourier.FourierLevels(d=d, weights=weights, level_maxabs=maxabs, power_sums=ps,
                                     c0=float(c[0]))

    def exhaustive_levels(self):
        return fourier.levels_from_table(self.table())

    def to_json(self):
        return {"type": "contraction", "d": self.d,
                "params": {"name": self.name, "base": self.base.to_json(),
                           "alpha": [float(x) for x in self.alpha]}}


def _elem_sym_all(v: Sequence[Fraction]) -> list[Fraction]:
    """``e_0..e_d`` of the given numbers via ``prod (1 + t v_i)``."""
    e = [Fraction(1)] + [Fraction(0)] * len(v)
    for i, x in enumerate(v):
        for l in range(i + 1, 0, -1):
            e[l] += x * e[l - 1]
    return e


class TwistConnection(Connection):
    """``rho([y, z]) = (1 + a(y) - r(z)) / 2`` on the ``2 d_1`` cube (y = first d_1 bits)."""

    def __init__(self, a: SymmetricConnection, r: SymmetricConnection, name: str = "twist"):
        if a.d != r.d:
            raise ValueError("a and r must live on the same cube")
        for c in (a, r):
            if abs(float(c.mean_p) - 0.5) > 1e-12:
                raise ValueError("repulsion and attraction parts need mean 1/2")
        self.a, self.r = a, r
        self.d1 = a.d
        self.group = GroupSpec.hypercube(2 * a.d)
        self.name = name
        self._my = hc_coordinate_mask(2 * a.d, range(a.d))
        self._mz = hc_coordinate_mask(2 * a.d, range(a.d, 2 * a.d))

    @property
    def mean_p(self):
        return (1 + _frac(self.a.mean_p) - _frac(self.r.mean_p)) / 2

    def evaluate_words(self, words):
        words = np.atleast_2d(words)
        wy = hc_popcount(words & self._my)
        wz = hc_popcount(words & self._mz)
        return (1.0 + self.a._vals[self.d1 - wy] - self.r._vals[self.d1 - wz]) / 2

    def fourier_levels(self):
        """``rho^(S) = a^(S)/2`` for ``S`` inside the first block, ``-r^(S)/2`` inside the
        second, zero for mixed nonempty ``S``."""
        la, lr = self.a.fourier_levels(), self.r.fourier_levels()
        ca, cr = la.exact_coeffs, lr.exact_coeffs
        d, d1 = self.d, self.d1
        weights = np.zeros(d + 1)
        maxabs = np.zeros(d + 1)
        weights[0] = float(self.mean_p) ** 2
        maxabs[0] = float(self.mean_p)
        for l in range(1, d1 + 1):
            weights[l] = float((la.exact_weights[l] + lr.exact_weights[l]) / 4)
            maxabs[l] = float(max(abs(ca[l]), abs(cr[l])) / 2) * math.sqrt(math.comb(d, l))
        ps = {}
        for k in range(1, 9):
            ps[k] = float(sum((math.comb(d1, l) * ((ca[l] / 2) ** k + (-cr[l] / 2) ** k)
                               for l in range(1, d1 + 1)), Fraction(0)))
        return fourier.FourierLevels(d=d, weights=weights, level_maxabs=maxabs, power_sums=ps,
                                     c0=float(self.mean_p))

    def to_json(self):
        return {"type": "twist", "d": self.d,
                "params": {"name": self.name, "a": self.a.to_json(), "r": self.r.to_json()}}


class IndicatorConnection(Connection):
    form = "indicator"

    def __init__(self, group: GroupSpec, members, name: str = "indicator", check: bool = True):
        members = np.asarray(members, dtype=bool)
        if members.shape != (group.order,):
            raise ValueError("membership must cover the whole group")
        if check:
            idx = np.arange(group.order, dtype=np.int64)
            if not np.array_equal(members, members[group.inv_idx(idx)]):
                raise ValueError("indicator set is not closed under inverse")
        self.group = group
        self.members = members
        self.name = name

    @property
    def is_indicator(self) -> bool:
        return True

    @property
    def size(self) -> int:
        return int(self.members.sum())

    @property
    def mean_p(self):
        return Fraction(self.size, self.group.order)

    def evaluate_idx(self, idx):
        return self.members[np.asarray(idx, dtype=np.int64)].astype(float)

    def evaluate_words(self, words):
        w = np.atleast_2d(words)
        return self.evaluate_idx(w[:, 0].astype(np.int64))

    def to_json(self):
        bits = base64.b64encode(np.packbits(self.members, bitorder="little").tobytes()).decode()
        return {"type": "indicator", "d": self.group.d,
                "params": {"name": self.name, "group": self.group.to_json(), "bitset": bits}}


class TableConnection(Connection):
    def __init__(self, group: GroupSpec, values, name: str = "table"):
        values = np.asarray(values, dtype=float)
        if values.shape != (group.order,):
            raise ValueError("value table must cover the whole group")
        if np.any(values < 0) or np.any(values > 1):
            raise ValueError("connection values must lie in [0,1]")
        idx = np.arange(group.order, dtype=np.int64)
        if not np.allclose(values, values[group.inv_idx(idx)], atol=0, rtol=0):
            raise ValueError("connection must satisfy sigma(g) = sigma(g^-1)")
        self.group = group
        self.values = values
        self.name = name

    @property
    def mean_p(self):
        return float(np.mean(self.values))

    @property
    def is_indicator(self) -> bool:
        return bool(np.all((self.values == 0) | (self.values == 1)))

    def evaluate_idx(self, idx):
        return self.values[np.asarray(idx, dtype=np.int64)]

    def evaluate_words(self, words):
        w = np.atleast_2d(words)
        return self.evaluate_idx(w[:, 0].astype(np.int64))

    def to_json(self):
        return {"type": "table", "d": self.group.d,
                "params": {"name": self.name, "group": self.group.to_json(),
                           "values": self.values.tolist()}}


class ConstantConnection(Connection):
    def __init__(self, group: GroupSpec, p):
        if not 0 <= float(p) <= 1:
            raise ValueError("p must lie in [0,1]")
        self.group = group
        self.p = p
        self.name = "const"

    @property
    def mean_p(self):
        return self.p

    @property
    def is_indicator(self) -> bool:
        return self.p in (0, 1)

    def evaluate_idx(self, idx):
        return np.full(np.shape(idx), float(self.p))

    def evaluate_words(self, words):
        return np.full(np.atleast_2d(words).shape[0], float(self.p))

    def to_json(self):
        return {"type": "constant", "d": self.group.d,
                "params": {"group": self.group.to_json(), "p": _json_num(self.p)}}


class SubgroupConnection(Connection):
    """``sigma(g) = q + (p - q) 1[g in H]`` with ``H = {g : g_j = 0 mod k}``."""

    def __init__(self, group: GroupSpec, axis: int, k: int, p, q):
        self.group = group
        self.axis, self.k, self.p, self.q = axis, k, p, q
        self.name = "sbm"

    @property
    def mean_p(self):
        return (_frac(self.p) + (self.k - 1) * _frac(self.q)) / self.k

    def in_subgroup(self, idx) -> np.ndarray:
        res = self.group.residues(np.asarray(idx, dtype=np.int64))
        return res[..., self.axis] % self.k == 0

    def evaluate_idx(self, idx):
        h = self.in_subgroup(idx)
        return np.where(h, float(self.p), float(self.q))

    def to_json(self):
        return {"type": "sbm", "d": 0,
                "params": {"group": self.group.to_json(), "axis": self.axis, "k": self.k,
                           "p": _json_num(self.p), "q": _json_num(self.q)}}


def _json_num(v):
    if isinstance(v, Fraction):
        return float(v) if v.denominator != 1 else int(v)
    return float(v) if not isinstance(v, (int, np.integer)) else int(v)


def connection_from_json(obj: dict) -> Connection:
    t = obj["type"]
    prm = obj.get("params", {})
    if t == "symmetric":
        extra = {k: v for k, v in prm.items() if k not in ("name", "values")}
        vals = [Fraction(v) if isinstance(v, int) else v for v in prm["values"]]
        return SymmetricConnection(SymmetricProfile.of(vals), prm.get("name", "profile"), extra)
    if t == "contraction":
        return ContractedConnection(connection_from_json(prm["base"]), prm["alpha"], prm.get("name", "contraction"))
    if t == "twist":
        return TwistConnection(connection_from_json(prm["a"]), connection_from_json(prm["r"]), prm.get("name", "twist"))
    if t == "indicator":
        g = GroupSpec.from_json(prm["group"])
        raw = np.frombuffer(base64.b64decode(prm["bitset"]), dtype=np.uint8)
        members = np.unpackbits(raw, bitorder="little")[: g.order].astype(bool)
        return IndicatorConnection(g, members, prm.get("name", "indicator"))
    if t == "table":
        return TableConnection(GroupSpec.from_json(prm["group"]), prm["values"], prm.get("name", "table"))
    if t == "constant":
        return ConstantConnection(GroupSpec.from_json(prm["group"]), prm["p"])
    if t == "sbm":
        return SubgroupConnection(GroupSpec.from_json(prm["group"]), prm["axis"], prm["k"], prm["p"], prm["q"])
    raise ValueError(f"unknown connection type {t!r}")


def levels_of(conn: Connection) -> fourier.FourierLevels:
    return conn.fourier_levels()


# -- quantiles and threshold builders ---------------------------------------------------

@dataclass(frozen=True)
class QuantileResult:
    tau: int
    achieved_p: Fraction
    requested_p: float


def _upper_tail(d: int, tau: int) -> Fraction:
    """``P[sum x_i >= tau]`` for uniform x; ``sum x_i = 2i - d`` with ``i`` plus-ones."""
    lo = max(0, -((d + tau) // -2))      # smallest i with 2i - d >= tau
    return Fraction(sum(math.comb(d, i) for i in range(lo, d + 1)), 1 << d)


def quantile_tau(d: int, p) -> QuantileResult:
    """Smallest ``tau = d (mod 2)`` whose upper tail is at most ``p``."""
    if not 0 < float(p) < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    pf = _frac(p)
    budget = pf * (1 << d)               # tail counts must not exceed this
    count, i, c = 0, d, 1                # c = C(d, i)
    while i >= 0 and count + c <= budget:
        count += c
        c = c * i // (d - i + 1)
        i -= 1
    return QuantileResult(2 * (i + 1) - d, Fraction(count, 1 << d), float(p))


def make_profile_connection(values, name="profile", **params) -> SymmetricConnection:
    return SymmetricConnection(SymmetricProfile.of(values), name, params)


def make_constant(d: int, p) -> SymmetricConnection:
    p = _frac(p) if isinstance(p, (int, Fraction)) else p
    return make_profile_connection([p] * (d + 1), "const", p=_json_num(p))


def make_hard_threshold(d: int, p) -> SymmetricConnection:
    q = quantile_tau(d, p)
    vals = [Fraction(1 if 2 * i - d >= q.tau else 0) for i in range(d + 1)]
    return make_profile_connection(vals, "threshold", p=float(p), tau=q.tau)


def make_double_threshold(d: int, p) -> SymmetricConnection:
    q = quantile_tau(d, _frac(p) / 2)
    vals = [Fraction(1 if abs(2 * i - d) >= q.tau else 0) for i in range(d + 1)]
    return make_profile_connection(vals, "double-threshold", p=float(p), delta=q.tau)


def make_parity_blend(d: int, kappa) -> SymmetricConnection:
    if not 0 <= float(kappa) <= 0.5:
        raise ValueError("kappa must lie in [0, 1/2]")
    k = _frac(kappa)
    vals = [Fraction(1, 2) + k * (-1) ** (d - i) for i in range(d + 1)]
    return make_profile_connection(vals, "parity-blend", kappa=float(kappa))


def make_majority(d: int) -> SymmetricConnection:
    vals = [Fraction(1) if 2 * i > d else (Fraction(1, 2) if 2 * i == d else Fraction(0))
            for i in range(d + 1)]
    return make_profile_connection(vals, "maj")


def make_interval_union(d: int, intervals: Sequence[tuple[int, int]], name="intervals") -> SymmetricConnection:
    """Indicator of ``sum x_i`` lying in a union of inclusive integer intervals."""
    iv = sorted((int(a), int(b)) for a, b in intervals)
    for a, b in iv:
        if a > b:
            raise ValueError(f"empty interval [{a}, {b}]")
    for (a1, b1), (a2, b2) in zip(iv, iv[1:]):
        if a2 <= b1:
            raise ValueError(f"intervals [{a1},{b1}] and [{a2},{b2}] overlap")
    vals = [Fraction(int(any(a <= 2 * i - d <= b for a, b in iv))) for i in range(d + 1)]
    return make_profile_connection(vals, name, intervals=[list(x) for x in iv])


def interval_set_I(d: int, s: int, d1: int | None = None) -> list[tuple[int, int]]:
    """``{d1, d1+2, ..., d1+2(s-2)} u [d1 + ceil(sqrt d), d]``."""
    d1 = d // 2 if d1 is None else d1
    top = d1 + math.isqrt(d - 1) + 1 if d > 1 else d1 + 1
    pts = [(d1 + 2 * j, d1 + 2 * j) for j in range(s - 1)]
    return pts + [(top, d)]


def interval_set_I_sym(d: int, s: int) -> list[tuple[int, int]]:
    """Symmetric variant: ``[-d, -h] u {-2(s-2), ..., 2(s-2)} u [h, d]`` with
    ``h = d/2 + ceil(sqrt d)``; the middle block is centred at 0."""
    d1 = d // 2
    top = d1 + math.isqrt(d - 1) + 1 if d > 1 else d1 + 1
    mid = [(2 * j, 2 * j) for j in range(-(s - 2), s - 1)]
    return [(-d, -top)] + mid + [(top, d)]


def make_hnmaj(d: int) -> ContractedConnection:
    """``Maj(h x)`` with ``h = (+1^{d/2}, -1^{d/2})``."""
    if d % 2:
        raise ValueError("half-negated majority needs even d")
    h = np.array([1.0] * (d // 2) + [-1.0] * (d // 2))
    return ContractedConnection(make_majority(d), h, name="hnmaj")


def make_coefficient_contraction(sigma: SymmetricConnection, alpha) -> ContractedConnection:
    if not isinstance(sigma, SymmetricConnection):
        raise ValueError("contraction needs a symmetric-profile connection")
    return ContractedConnection(sigma, alpha)


def make_repulsion_attraction(a: SymmetricConnection, r: SymmetricConnection) -> TwistConnection:
    return TwistConnection(a, r)


# -- random indicators ------------------------------------------------------------------

def sample_random_indicator(spec: GroupSpec, p, rng: np.random.Generator,
                            cap: int = ENUMERATION_CAP) -> IndicatorConnection:
    """AnteU: each orbit ``{g, g^-1}`` is included independently with probability ``p``."""
    if spec.order > cap:
        raise ValueError(f"group order {spec.order} exceeds enumeration cap {cap}")
    idx = np.arange(spec.order, dtype=np.int64)
    rep = np.minimum(idx, spec.inv_idx(idx))
    u = rng.random(spec.order)
    members = u[rep] < float(p)
    return IndicatorConnection(spec, members, name="anteu", check=False)


def sample_postu_indicator(spec: GroupSpec, k: int, rng: np.random.Generator,
                           cap: int = ENUMERATION_CAP) -> IndicatorConnection:
    """PostU: ``k`` uniform draws with replacement, closed under inverse."""
    if spec.order > cap:
        raise ValueError(f"group order {spec.order} exceeds enumeration cap {cap}")
    if not 0 <= k <= spec.order:
        raise ValueError("k must lie in [0, |G|]")
    z = rng.integers(0, spec.order, size=k)
    members = np.zeros(spec.order, dtype=bool)
    members[z] = True
    members[spec.inv_idx(z)] = True
    return IndicatorConnection(spec, members, name="postu", check=False)


def orbit_sizes(spec: GroupSpec) -> np.ndarray:
    """Size of the ``{g, g^-1}`` orbit of each element."""
    idx = np.arange(spec.order, dtype=np.int64)
    return np.where(spec.inv_idx(idx) == idx, 1, 2)


def make_sbm_connection(spec: GroupSpec, k: int, p, q) -> SubgroupConnection:
    if spec.kind != CYCLIC:
        raise ValueError("SBM connection needs a cyclic-product group")
    if float(q) > float(p):
        raise ValueError("need q <= p")
    for j, m in enumerate(spec.moduli):
        if m % k == 0:
            return SubgroupConnection(spec, j, k, p, q)
    raise ValueError(f"no modulus divisible by {k}; no subgroup of index {k} available")


# -- truncated connection ---------------------------------------------------------------

def _remove_levels(coeffs: list, d: int, m: int) -> list:
    return [Fraction(0) if (1 <= l <= m - 1 or d - m <= l <= d) else c for l, c in enumerate(coeffs)]


def make_truncated_connection(d: int, m: int, p) -> SymmetricConnection:
    """Symmetric connection with mean ``p`` whose levels ``1..m-1`` and ``d-m..d`` vanish.

    Base function is the +-1 majority (0 at ties) for odd ``m`` and
    ``H = T(|sum x| / (sqrt d ln d))`` for even ``m``.  Then
    ``f = R_m(T(A R_m(base))) / 2``, ``h = (f - E f)/2`` and ``sigma = p (1 + h)``
    (or ``1 - (1 - p)(1 + h)`` when ``p > 1/2``).
    """
    if not (1 <= m and 2 * m < d):
        raise ValueError("need 1 <= m < d/2")
    pf = _frac(p)
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0,1]")
    if m % 2:
        base = [Fraction((2 * i > d) - (2 * i < d)) for i in range(d + 1)]
    else:
        scale = math.sqrt(d) * math.log(d)
        base = [min(abs(2 * i - d) / scale, 1.0) for i in range(d + 1)]
    A = 1.0 / (math.e * (4 * m + 1) * (2 * m + 2) * math.log(d) ** (m / 2))
    c = _remove_levels(list(fourier.levels_from_profile(base).exact_coeffs), d, m)
    g = [A * float(v) for v in fourier.profile_from_levels(d, c)]
    tg = [min(max(v, -1.0), 1.0) for v in g]
    c2 = _remove_levels(list(fourier.levels_from_profile(tg).exact_coeffs), d, m)
    f = [v / 2 for v in fourier.profile_from_levels(d, c2)]
    ef = c2[0] / 2
    h = [(v - ef) / 2 for v in f]
    if pf <= Fraction(1, 2):
        vals = [pf * (1 + x) for x in h]
    else:
        vals = [1 - (1 - pf) * (1 + x) for x in h]
    if any(v < 0 or v > 1 for v in vals):
        raise ValueError("truncated construction left [0,1]")
    return make_profile_connection(vals, "truncated", m=m, p=float(p))
