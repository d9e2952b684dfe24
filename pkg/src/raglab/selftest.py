"""Quick oracle comparisons behind ``--selftest``."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import bounds, connections as cx, fourier, graphs, stats, wishart
from .group import GroupSpec, orbit_partition
from .rng import stream


def _check_fourier():
    yield "maj3 coefficients", fourier.levels_from_profile([0, 0, 1, 1]).exact_coeffs == (
        Fraction(1, 2), Fraction(1, 4), Fraction(0), Fraction(-1, 4))
    rng = stream(0, 0)
    vals = rng.random(9)
    lv = fourier.levels_from_profile(vals)
    table = fourier.symmetric_table(vals)
    worst = max(abs(fourier.brute_force_coefficient(table, (1 << l) - 1) - lv.coeffs[l]) for l in range(9))
    yield "enumeration oracle d=8", worst < 1e-12
    d = 9
    yield "krawtchouk duality", all(math.comb(d, w) * fourier.krawtchouk(d, l, w) ==
                                    math.comb(d, l) * fourier.krawtchouk(d, w, l)
                                    for l in range(d + 1) for w in range(d + 1))
    g = fourier.gamma_profile(cx.make_majority(7).fourier_levels())
    yield "gamma centred", g.moment_exact(1) == 0


def _check_bounds():
    for kappa in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
        g = fourier.gamma_profile(cx.make_parity_blend(5, kappa).fourier_levels())
        r = bounds.kl_bound_exact(g, 3)
        yield f"parity blend KL kappa={float(kappa)}", abs(r.total - math.log1p(16 * float(kappa) ** 4)) < 1e-12
    yield "pinsker clip", bounds.pinsker(2.0) == 1.0 and abs(bounds.pinsker(0.02) - 0.1) < 1e-15


def _brute_cycles(A, p):
    n = A.shape[0]
    B = A.astype(float) - p
    t3 = sum(B[i, j] * B[j, k] * B[k, i] for i, j, k in itertools.combinations(range(n), 3))
    t4 = 0.0
    for q in itertools.combinations(range(n), 4):
        a, b, c, d = q
        for x, y, z, w in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            t4 += B[x, y] * B[y, z] * B[z, w] * B[w, x]
    return t3, t4


def _check_detect():
    rng = stream(0, 1)
    ok = True
    for _ in range(5):
        g = graphs.sample_er(8, 0.5, rng)
        t3, t4 = _brute_cycles(g.adjacency(), 0.5)
        ok &= abs(stats.tau3(g, 0.5).value - t3) < 1e-9 and abs(stats.tau4(g, 0.5).value - t4) < 1e-9
    yield "cycle statistics vs enumeration", ok
    a = np.zeros((4, 4), dtype=bool)
    a[0, 1] = a[1, 0] = True
    yield "isolated pair found", stats.neighborhood_identical_scan(a)[0]


def _check_cayley():
    yield "orbits of Z_4", orbit_partition(GroupSpec.cyclic(4)) == [(0,), (1, 3), (2,)]
    spec = GroupSpec.cyclic(3, 2, 2)
    ind = cx.sample_postu_indicator(spec, 5, stream(0, 2))
    idx = np.arange(spec.order)
    yield "postu closed under inverse", bool(np.array_equal(ind.members, ind.members[spec.inv_idx(idx)]))
    hc = GroupSpec.hypercube(6)
    ind = cx.sample_random_indicator(hc, 0.5, stream(0, 3))
    g1 = graphs.sample_rag(10, ind, stream(0, 4))
    g2 = graphs.sample_cayley_induced(10, hc, ind, stream(0, 4))
    yield "cayley sampler runs", g1.n == g2.n == 10


def _check_wishart():
    rng = stream(0, 5)
    x, y = rng.standard_normal((6, 20)), rng.standard_normal((6, 20))
    yield "rotation identity", wishart.rotation_check(x, y) < 1e-9
    m = wishart.sample_ensemble("wishart_diff", 6, 20, stream(0, 6))
    g1 = wishart.sign_graph(m)
    g2 = wishart.gaussian_twisted_rgg(6, 20, stream(0, 6))
    yield "sign graph equals twisted Gaussian graph", g1 == g2


def _check_esym():
    ok = True
    for d in range(2, 17):
        for s in range(1, d):
            for t in range(2, 7):
                ex = fourier.elem_sym_log_moment(d, s, t)
                b = fourier.elem_sym_bounds(d, s, t)
                ok &= b.log_lower <= ex + 1e-12 and ex <= b.log_upper_hc + 1e-12
                if b.log_upper_mid is not None:
                    ok &= ex <= b.log_upper_mid + 1e-12
    yield "bounds bracket exact moments d<=16", ok
    yield "norm of e_s squared", all(abs(math.exp(2 * fourier.elem_sym_log_moment(12, s, 2)) - math.comb(12, s))
                                     < 1e-9 * math.comb(12, s) for s in range(13))


CHECKS = {"fourier": _check_fourier, "bounds": _check_bounds, "detect": _check_detect,
          "cayley": _check_cayley, "wishart": _check_wishart, "esym": _check_esym}


def run_selftest(command: str) -> tuple[bool, list[str]]:
    names = list(CHECKS) if command == "run" else [command]
    lines, ok = [], True
    for name in names:
        for label, passed in CHECKS[name]():
            passed = bool(passed)
            ok &= passed
            lines.append(f"{'PASS' if passed else 'FAIL'}  {name}: {label}")
    return ok, lines
