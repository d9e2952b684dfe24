"""Graph samplers: G(n, p), random algebraic graphs, Cayley induced subgraphs and SBM.

Sampling order is fixed so that seed-matched runs of different samplers can be
compared: latent elements are drawn first (``n`` iid uniform elements), then one
uniform per unordered pair in ``(i, j), i < j`` row-major order, and the edge is
present iff ``u < sigma``.

Binary export layout (little-endian)::

    bytes 0..3    magic  b"RAG1"
    bytes 4..7    uint32 n
    bytes 8..11   uint32 flags   (bit 0: latents were kept in memory; informational)
    bytes 12..15  uint32 row_bytes = ceil(n / 8)
    then n rows of row_bytes bytes, row i bit j (MSB first) = A[i, j]
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .connections import Connection, IndicatorConnection, make_sbm_connection
from .group import HYPERCUBE, GroupSpec, hc_random

MAGIC = b"RAG1"


@dataclass(eq=False)
class GraphSample:
    n: int
    bits: np.ndarray            # (n, ceil(n/8)) uint8, np.packbits rows
    p: float
    model_tag: dict = field(default_factory=dict)
    latents: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_adjacency(cls, adj, p: float, model_tag: dict | None = None, latents=None) -> "GraphSample":
        adj = np.asarray(adj, dtype=bool)
        if adj.shape[0] != adj.shape[1] or not np.array_equal(adj, adj.T) or adj.diagonal().any():
            raise ValueError("adjacency must be symmetric with zero diagonal")
        return cls(adj.shape[0], np.packbits(adj, axis=1), float(p), dict(model_tag or {}), latents)

    @classmethod
    def from_pairs(cls, n: int, edges_upper: np.ndarray, p: float, model_tag=None, latents=None) -> "GraphSample":
        adj = np.zeros((n, n), dtype=bool)
        iu, ju = np.triu_indices(n, 1)
        adj[iu, ju] = edges_upper
        adj[ju, iu] = edges_upper
        return cls(n, np.packbits(adj, axis=1), float(p), dict(model_tag or {}), latents)

    def adjacency(self) -> np.ndarray:
        return np.unpackbits(self.bits, axis=1, count=self.n).astype(bool)

    @property
    def edge_count(self) -> int:
        return int(np.unpackbits(self.bits, axis=1, count=self.n).sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        a = self.adjacency()
        iu, ju = np.nonzero(np.triu(a, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def row_words(self) -> np.ndarray:
        """Rows as ``(n, ceil(n/64))`` uint64 words, bit ``j`` of row ``i`` = ``A[i, j]``."""
        w = (self.n + 63) // 64
        packed = np.packbits(self.adjacency(), axis=1, bitorder="little")
        buf = np.zeros((self.n, 8 * w), dtype=np.uint8)
        buf[:, : packed.shape[1]] = packed
        return buf.view("<u8")

    def to_edge_list(self) -> str:
        return "".join(f"{i} {j}\n" for i, j in self.edges())

    def to_bytes(self) -> bytes:
        flags = 1 if self.latents is not None else 0
        head = MAGIC + struct.pack("<III", self.n, flags, self.bits.shape[1])
        return head + np.ascontiguousarray(self.bits).tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes, p: float = 0.5) -> "GraphSample":
        if blob[:4] != MAGIC:
            raise ValueError("bad magic")
        n, _flags, rb = struct.unpack("<III", blob[4:16])
        bits = np.frombuffer(blob[16:16 + n * rb], dtype=np.uint8).reshape(n, rb).copy()
        return cls(n, bits, p)

    def __eq__(self, other):
        return isinstance(other, GraphSample) and self.n == other.n and np.array_equal(self.bits, other.bits)


def _pairs(n: int):
    return np.triu_indices(n, 1)


def sample_er(n: int, p: float, rng: np.random.Generator, tag: dict | None = None) -> GraphSample:
    if not 0 <= float(p) <= 1:
        raise ValueError("p must lie in [0,1]")
    u = rng.random(n * (n - 1) // 2)
    return GraphSample.from_pairs(n, u < float(p), float(p), {"law": "er", "n": n, "p": float(p), **(tag or {})})


def draw_latents(spec: GroupSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` iid uniform elements: ``(n, W)`` words on the hypercube, indices otherwise."""
    if spec.kind == HYPERCUBE:
        return hc_random(rng, n, spec.d)
    return rng.integers(0, spec.order, size=n, dtype=np.int64)


def pair_values(conn: Connection, latents: np.ndarray, side: str = "left") -> np.ndarray:
    """``sigma`` at every unordered pair ``i < j``."""
    spec = conn.group
    n = latents.shape[0]
    iu, ju = _pairs(n)
    if spec.kind == HYPERCUBE:
        return conn.evaluate_words(latents[iu] ^ latents[ju])
    xi, xj = latents[iu], latents[ju]
    if side == "left":
        g = spec.mul_idx(spec.inv_idx(xi), xj)
    elif side == "right":
        g = spec.mul_idx(xi, spec.inv_idx(xj))
    else:
        raise ValueError("side must be 'left' or 'right'")
    return conn.evaluate_idx(g)


def sample_rag(n: int, conn: Connection, rng: np.random.Generator, side: str = "left",
               keep_latents: bool = False, tag: dict | None = None) -> GraphSample:
    x = draw_latents(conn.group, n, rng)
    sig = pair_values(conn, x, side)
    u = rng.random(sig.shape[0])
    p = float(conn.mean_p)
    return GraphSample.from_pairs(n, u < sig, p, {"law": "rag", "n": n, "side": side,
                                                 "connection": conn.name, **(tag or {})},
                                  x if keep_latents else None)


def resample_edges(conn: Connection, latents: np.ndarray, rng: np.random.Generator,
                   side: str = "left") -> np.ndarray:
    """Edge indicators for given latents (upper-triangle order)."""
    sig = pair_values(conn, latents, side)
    return rng.random(sig.shape[0]) < sig


def _distinct_latents(spec: GroupSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    if spec.order < n:
        raise ValueError(f"group of order {spec.order} has fewer than n={n} elements")
    if spec.order < 2 * n:
        perm = rng.permutation(spec.order)[:n].astype(np.int64)
        if spec.kind == HYPERCUBE:
            return perm.astype(np.uint64)[:, None]
        return perm
    x = draw_latents(spec, n, rng)
    while True:
        key = x if x.ndim == 2 else x[:, None]
        _, first = np.unique(key, axis=0, return_index=True)
        dup = np.setdiff1d(np.arange(n), first)
        if dup.size == 0:
            return x
        x[dup] = draw_latents(spec, dup.size, rng)


def sample_cayley_induced(n: int, spec: GroupSpec, indicator: Connection, rng: np.random.Generator,
                          keep_latents: bool = False, tag: dict | None = None) -> GraphSample:
    """Induced subgraph of the Cayley graph on ``n`` distinct uniform elements.

    Duplicates among the first ``n`` iid draws are redrawn, so without collisions
    the latents equal those of a seed-matched :func:`sample_rag` call.
    """
    if indicator.group != spec:
        raise ValueError("indicator lives on a different group")
    x = _distinct_latents(spec, n, rng)
    sig = pair_values(indicator, x, "left")
    if np.any((sig != 0) & (sig != 1)):
        raise ValueError("Cayley sampling needs a {0,1}-valued connection")
    return GraphSample.from_pairs(n, sig == 1, float(indicator.mean_p),
                                  {"law": "cayley", "n": n, **(tag or {})}, x if keep_latents else None)


def sample_sbm_direct(n: int, k: int, p: float, q: float, rng: np.random.Generator,
                      keep_latents: bool = False, tag: dict | None = None) -> GraphSample:
    if q > p:
        raise ValueError("need q <= p")
    labels = rng.integers(0, k, size=n, dtype=np.int64)
    iu, ju = _pairs(n)
    same = labels[iu] == labels[ju]
    u = rng.random(iu.size)
    edges = u < np.where(same, p, q)
    mean = (p + (k - 1) * q) / k
    return GraphSample.from_pairs(n, edges, mean, {"law": "sbm", "n": n, "k": k, "p": p, "q": q, **(tag or {})},
                                  labels if keep_latents else None)


# -- picklable model descriptions -------------------------------------------------------

@dataclass(frozen=True)
class ERModel:
    n: int
    p: float

    def sample(self, rng):
        return sample_er(self.n, self.p, rng)

    def describe(self):
        return {"law": "er", "n": self.n, "p": self.p}


@dataclass(frozen=True, eq=False)
class RAGModel:
    n: int
    connection: Connection
    side: str = "left"

    @property
    def p(self) -> float:
        return float(self.connection.mean_p)

    def sample(self, rng):
        return sample_rag(self.n, self.connection, rng, self.side)

    def describe(self):
        return {"law": "rag", "n": self.n, "side": self.side, "connection": self.connection.to_json()}


@dataclass(frozen=True, eq=False)
class CayleyModel:
    n: int
    indicator: IndicatorConnection

    @property
    def p(self) -> float:
        return float(self.indicator.mean_p)

    def sample(self, rng):
        return sample_cayley_induced(self.n, self.indicator.group, self.indicator, rng)

    def describe(self):
        return {"law": "cayley", "n": self.n, "indicator": self.indicator.to_json()}


@dataclass(frozen=True)
class SBMModel:
    n: int
    k: int
    p_in: float
    q_out: float

    @property
    def p(self) -> float:
        return (self.p_in + (self.k - 1) * self.q_out) / self.k

    def sample(self, rng):
        return sample_sbm_direct(self.n, self.k, self.p_in, self.q_out, rng)

    def describe(self):
        return {"law": "sbm", "n": self.n, "k": self.k, "p": self.p_in, "q": self.q_out}


def sbm_as_rag(n: int, k: int, p: float, q: float, moduli: tuple = None) -> RAGModel:
    """SBM realised as a RAG over a cyclic product with a subgroup of index ``k``."""
    spec = GroupSpec.cyclic(*(moduli or (k,)))
    return RAGModel(n, make_sbm_connection(spec, k, p, q))


@dataclass(frozen=True)
class SBMEquivalenceReport:
    trials: int
    direct_mean: float
    rag_mean: float
    direct_se: float
    rag_se: float
    z: float


def sbm_equivalence(n: int, k: int, p: float, q: float, trials: int, seed: int,
                    moduli: tuple = None, statistic=None) -> SBMEquivalenceReport:
    """Compare the mean of a statistic (default: triangle count) under the direct SBM
    sampler and its subgroup-RAG realisation."""
    from .rng import stream
    from .stats import triangle_count
    stat = statistic or triangle_count
    direct = SBMModel(n, k, p, q)
    rag = sbm_as_rag(n, k, p, q, moduli)
    a = np.array([stat(direct.sample(stream(seed, 0, t))) for t in range(trials)], dtype=float)
    b = np.array([stat(rag.sample(stream(seed, 1, t))) for t in range(trials)], dtype=float)
    sa, sb = a.std(ddof=1) / np.sqrt(trials), b.std(ddof=1) / np.sqrt(trials)
    se = np.hypot(sa, sb)
    z = float((a.mean() - b.mean()) / se) if se > 0 else 0.0
    return SBMEquivalenceReport(trials, float(a.mean()), float(b.mean()), float(sa), float(sb), z)
