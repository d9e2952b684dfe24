"""Finite groups: the hypercube {±1}^d as packed bits, products of cyclic
groups, and groups given by an explicit multiplication table.

Hypercube elements are bit masks with bit ``i`` set iff coordinate ``i`` equals
-1, so the group product is XOR and the Hamming class is a popcount.  Single
elements are Python ints (any ``d``); batches are ``(..., W)`` arrays of
uint64 words with ``W = ceil(d / 64)``.  Cyclic-product elements are residue
tuples, or integer indices in little-endian mixed radix.  Table elements are
indices with identity 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

ENUMERATION_CAP = 2 ** 24

HYPERCUBE = "hypercube"
CYCLIC = "cyclic"
TABLE = "table"


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupSpec:
    kind: str
    d: int = 0
    moduli: tuple = ()
    op: np.ndarray | None = field(default=None, repr=False)
    inv_table: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def hypercube(cls, d: int) -> "GroupSpec":
        if d < 1:
            raise GroupError("hypercube dimension must be positive")
        return cls(HYPERCUBE, d=int(d))

    @classmethod
    def cyclic(cls, *moduli: int) -> "GroupSpec":
        if len(moduli) == 1 and not np.isscalar(moduli[0]):
            moduli = tuple(moduli[0])
        if not moduli or any(int(m) < 2 for m in moduli):
            raise GroupError("cyclic moduli must all be >= 2")
        return cls(CYCLIC, moduli=tuple(int(m) for m in moduli))

    @classmethod
    def table(cls, op, inv=None, cap: int = ENUMERATION_CAP) -> "GroupSpec":
        op = np.asarray(op, dtype=np.int64)
        n = op.shape[0]
        if op.shape != (n, n):
            raise GroupError("multiplication table must be square")
        if n > cap:
            raise GroupError(f"table order {n} exceeds enumeration cap {cap}")
        full = np.arange(n)
        if not all(np.array_equal(np.sort(row), full) for row in op) or \
                not all(np.array_equal(np.sort(col), full) for col in op.T):
            raise GroupError("multiplication table is not a Latin square")
        if not (np.array_equal(op[0], full) and np.array_equal(op[:, 0], full)):
            raise GroupError("index 0 must be the identity")
        derived = np.argmax(op == 0, axis=1)
        if inv is None:
            inv = derived
        inv = np.asarray(inv, dtype=np.int64)
        if inv.shape != (n,) or not np.array_equal(inv, derived):
            raise GroupError("inverse table inconsistent with multiplication table")
        if not np.array_equal(inv[inv], full):
            raise GroupError("inverse table is not an involution")
        op.setflags(write=False)
        inv.setflags(write=False)
        return cls(TABLE, op=op, inv_table=inv)

    @property
    def order(self) -> int:
        if self.kind == HYPERCUBE:
            return 2 ** self.d
        if self.kind == CYCLIC:
            return prod(self.moduli)
        return int(self.op.shape[0])

    @property
    def words(self) -> int:
        return (self.d + 63) // 64

    @property
    def is_abelian(self) -> bool:
        if self.kind != TABLE:
            return True
        return bool(np.array_equal(self.op, self.op.T))

    # -- vectorised index arithmetic -------------------------------------------------

    def residues(self, idx) -> np.ndarray:
        """Residue vectors ``(..., len(moduli))`` for cyclic indices."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty(idx.shape + (len(self.moduli),), dtype=np.int64)
        rest = idx.copy()
        for j, m in enumerate(self.moduli):
            rest, out[..., j] = np.divmod(rest, m)
        return out

    def index_of(self, res) -> np.ndarray:
        res = np.asarray(res, dtype=np.int64)
        idx = np.zeros(res.shape[:-1], dtype=np.int64)
        stride = 1
        for j, m in enumerate(self.moduli):
            idx += (res[..., j] % m) * stride
            stride *= m
        return idx

    def mul_idx(self, a, b) -> np.ndarray:
        """Elementwise product of element-index arrays (hypercube needs d <= 62)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.kind == HYPERCUBE:
            return a ^ b
        if self.kind == CYCLIC:
            return self.index_of(self.residues(a) + self.residues(b))
        return self.op[a, b]

    def inv_idx(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.kind == HYPERCUBE:
            return a
        if self.kind == CYCLIC:
            return self.index_of(-self.residues(a))
        return self.inv_table[a]

    # -- serialisation ----------------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == HYPERCUBE:
            return {"kind": HYPERCUBE, "d": self.d}
        if self.kind == CYCLIC:
            return {"kind": CYCLIC, "moduli": list(self.moduli)}
        return {"kind": TABLE, "op": self.op.tolist(), "inv": self.inv_table.tolist()}

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("kind")
        if kind == HYPERCUBE:
            return cls.hypercube(obj["d"])
        if kind == CYCLIC:
            return cls.cyclic(*obj["moduli"])
        if kind == TABLE:
            return cls.table(obj["op"], obj.get("inv"))
        raise GroupError(f"unknown group kind {kind!r}")

    def __eq__(self, other):
        if not isinstance(other, GroupSpec):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))


def _check(spec: GroupSpec, x):
    if spec.kind == HYPERCUBE:
        if not isinstance(x, (int, np.integer)) or not 0 <= int(x) < 2 ** spec.d:
            raise GroupError(f"{x!r} is not an element of the {spec.d}-cube")
    elif spec.kind == CYCLIC:
        if isinstance(x, (int, np.integer)):
            if not 0 <= int(x) < spec.order:
                raise GroupError(f"index {x} out of range")
        elif len(x) != len(spec.moduli):
            raise GroupError("residue vector has wrong length")
    else:
        if not isinstance(x, (int, np.integer)) or not 0 <= int(x) < spec.order:
            raise GroupError(f"element index {x!r} out of range for table of order {spec.order}")


def identity(spec: GroupSpec):
    if spec.kind == CYCLIC and len(spec.moduli) > 1:
        return (0,) * len(spec.moduli)
    return 0


def mul(spec: GroupSpec, x, y):
    _check(spec, x)
    _check(spec, y)
    if spec.kind == HYPERCUBE:
        return int(x) ^ int(y)
    if spec.kind == CYCLIC:
        if isinstance(x, (int, np.integer)) and isinstance(y, (int, np.integer)):
            return int(spec.mul_idx(x, y))
        return tuple((int(a) + int(b)) % m for a, b, m in zip(x, y, spec.moduli))
    return int(spec.op[int(x), int(y)])


def inv(spec: GroupSpec, x):
    _check(spec, x)
    if spec.kind == HYPERCUBE:
        return int(x)
    if spec.kind == CYCLIC:
        if isinstance(x, (int, np.integer)):
            return int(spec.inv_idx(x))
        return tuple((-int(a)) % m for a, m in zip(x, spec.moduli))
    return int(spec.inv_table[int(x)])


def hamming_class(spec: GroupSpec, x) -> int:
    """Number of -1 coordinates.  Note ``d - hamming_class`` counts the +1s."""
    if spec.kind != HYPERCUBE:
        raise GroupError("hamming_class is only defined on the hypercube")
    _check(spec, x)
    return int(x).bit_count()


def from_signs(signs: Sequence[int]) -> int:
    """Pack a ±1 vector (coordinate 0 first) into a bit mask."""
    x = 0
    for i, s in enumerate(signs):
        if s == -1:
            x |= 1 << i
        elif s != 1:
            raise GroupError("hypercube coordinates must be ±1")
    return x


def to_signs(x: int, d: int) -> np.ndarray:
    return np.array([-1 if (x >> i) & 1 else 1 for i in range(d)], dtype=np.int64)


def orbit_partition(spec: GroupSpec, cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """Partition of the element indices into ``{g, g^-1}`` orbits."""
    if spec.order > cap:
        raise GroupError(f"group order {spec.order} exceeds enumeration cap {cap}")
    idx = np.arange(spec.order, dtype=np.int64)
    partner = spec.inv_idx(idx)
    return [(int(g),) if partner[g] == g else (int(g), int(partner[g]))
            for g in idx if partner[g] >= g]


# -- packed hypercube batches -----------------------------------------------------------

def hc_mask_last(d: int) -> np.uint64:
    r = d % 64
    return np.uint64(0xFFFFFFFFFFFFFFFF) if r == 0 else np.uint64((1 << r) - 1)


def hc_random(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """``n`` iid uniform elements of {±1}^d as an ``(n, W)`` uint64 array."""
    w = (d + 63) // 64
    out = rng.integers(0, np.iinfo(np.uint64).max, size=(n, w), dtype=np.uint64, endpoint=True)
    out[:, -1] &= hc_mask_last(d)
    return out


def hc_popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def hc_from_ints(xs, d: int) -> np.ndarray:
    w = (d + 63) // 64
    xs = [int(x) for x in np.atleast_1d(xs)]
    out = np.zeros((len(xs), w), dtype=np.uint64)
    for r, x in enumerate(xs):
        for k in range(w):
            out[r, k] = (x >> (64 * k)) & 0xFFFFFFFFFFFFFFFF
    return out


def hc_to_ints(words: np.ndarray) -> list[int]:
    words = np.atleast_2d(words)
    return [sum(int(v) << (64 * k) for k, v in enumerate(row)) for row in words]


def hc_all(d: int, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All ``2^d`` elements in index order as ``(2^d, 1)`` words (``d <= 24`` by default)."""
    if 2 ** d > cap:
        raise GroupError(f"2^{d} exceeds enumeration cap")
    return np.arange(2 ** d, dtype=np.uint64)[:, None]


def hc_coordinate_mask(d: int, coords) -> np.ndarray:
    """Word mask with the given coordinates set."""
    w = (d + 63) // 64
    out = np.zeros(w, dtype=np.uint64)
    for i in coords:
        out[i // 64] |= np.uint64(1) << np.uint64(i % 64)
    return out
