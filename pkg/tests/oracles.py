"""Independent brute-force references used by the tests.

Everything here works on explicit +-1 vectors or adjacency matrices with plain
loops; nothing is imported from the package under test.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def cube(d):
    """All points of {-1,1}^d as rows; row index bit i set means coordinate i is -1."""
    idx = np.arange(2 ** d)
    return 1 - 2 * ((idx[:, None] >> np.arange(d)) & 1)


def profile_table(values, d):
    """Table of a symmetric function; ``values[i]`` sits at points with i plus-ones."""
    pts = cube(d)
    plus = (pts == 1).sum(axis=1)
    return [values[i] for i in plus]


def coefficient(table, S, d):
    """``E[f(x) prod_{i in S} x_i]`` by direct summation (exact when table holds Fractions)."""
    pts = cube(d)
    total = 0
    for x, v in zip(pts, table):
        total += v * int(np.prod([x[i] for i in S]))
    return Fraction(total, 2 ** d) if isinstance(total, (int, Fraction)) else total / 2 ** d


def elem_sym_at(d, l, w):
    """``e_l`` at a point with w minus-ones, by summing over subsets."""
    x = [-1] * w + [1] * (d - w)
    return sum(math.prod(x[i] for i in S) for S in itertools.combinations(range(d), l))


def gamma_table(table, d, p):
    """``gamma(g) = E_z[(s(z) - p)(s(z g) - p)]`` for every g (XOR encoding)."""
    n = 2 ** d
    return [sum((table[z] - p) * (table[z ^ g] - p) for z in range(n)) / n for g in range(n)]


def signed_cycles(A, p, k):
    """Sum over simple unordered k-cycles of prod (A_e - p)."""
    n = A.shape[0]
    B = A.astype(object) - p if isinstance(p, Fraction) else A.astype(float) - p
    total = 0
    for verts in itertools.combinations(range(n), k):
        first, rest = verts[0], verts[1:]
        for perm in itertools.permutations(rest):
            if perm[0] > perm[-1]:
                continue          # each cycle once: fix start and direction
            cyc = (first,) + perm
            term = 1
            for a, b in zip(cyc, cyc[1:] + (first,)):
                term = term * B[a, b]
            total += term
    return total


def random_graph(n, p, rng):
    a = np.triu(rng.random((n, n)) < p, 1)
    return a | a.T


def walsh_by_tensor(table, d):
    """All coefficients ``2^-d sum_x f(x) prod_{i in S} x_i`` by applying the 2-point
    transform along each axis of the ``(2,)*d`` reshaped table; index = bitmask of S."""
    t = np.asarray(table, dtype=float).reshape((2,) * d)
    h = np.array([[1.0, 1.0], [1.0, -1.0]])
    for axis in range(d):
        t = np.moveaxis(np.tensordot(h, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1) / 2 ** d
