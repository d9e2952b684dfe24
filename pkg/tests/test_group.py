import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from raglab.group import (GroupError, GroupSpec, from_signs, hamming_class, hc_all, hc_coordinate_mask,
                          hc_from_ints, hc_popcount, hc_random, hc_to_ints, identity, inv, mul,
                          orbit_partition, to_signs)


def s3_table():
    perms = list(itertools.permutations(range(3)))
    perms.sort(key=lambda q: q != (0, 1, 2))
    index = {q: i for i, q in enumerate(perms)}
    op = [[index[tuple(a[b[i]] for i in range(3))] for b in perms] for a in perms]
    return GroupSpec.table(op)


@given(d=st.integers(1, 130), data=st.data())
def test_hypercube_mul_matches_coordinatewise_product(d, data):
    x = data.draw(st.integers(0, 2 ** d - 1))
    y = data.draw(st.integers(0, 2 ** d - 1))
    spec = GroupSpec.hypercube(d)
    assert np.array_equal(to_signs(mul(spec, x, y), d), to_signs(x, d) * to_signs(y, d))
    assert inv(spec, x) == x
    assert mul(spec, x, identity(spec)) == x
    assert from_signs(to_signs(x, d)) == x
    assert hamming_class(spec, x) == int((to_signs(x, d) == -1).sum())


@given(st.lists(st.integers(2, 6), min_size=1, max_size=3), st.data())
def test_cyclic_group_axioms(moduli, data):
    spec = GroupSpec.cyclic(*moduli)
    if len(moduli) == 1:
        elem = st.integers(0, moduli[0] - 1)       # a single modulus uses plain integers
    else:
        elem = st.tuples(*[st.integers(0, m - 1) for m in moduli])
    x, y, z = data.draw(elem), data.draw(elem), data.draw(elem)
    assert mul(spec, mul(spec, x, y), z) == mul(spec, x, mul(spec, y, z))
    assert mul(spec, x, inv(spec, x)) == identity(spec)
    assert mul(spec, x, y) == mul(spec, y, x)


def test_index_roundtrip_and_vector_ops():
    spec = GroupSpec.cyclic(3, 2, 4)
    idx = np.arange(spec.order)
    assert np.array_equal(spec.index_of(spec.residues(idx)), idx)
    a, b = np.meshgrid(idx, idx)
    ab = spec.mul_idx(a, b)
    ref = np.array([[spec.index_of(np.array(mul(spec, tuple(spec.residues(x)), tuple(spec.residues(y)))))
                     for x in idx] for y in idx])
    assert np.array_equal(ab, ref)
    assert np.all(spec.mul_idx(idx, spec.inv_idx(idx)) == 0)


def test_table_group_nonabelian_and_validation():
    spec = s3_table()
    assert spec.order == 6 and not spec.is_abelian
    for x, y, z in itertools.product(range(6), repeat=3):
        assert mul(spec, mul(spec, x, y), z) == mul(spec, x, mul(spec, y, z))
    for x in range(6):
        assert mul(spec, x, inv(spec, x)) == 0
    with pytest.raises(GroupError):
        GroupSpec.table([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        GroupSpec.table([[1, 0], [0, 1]])


def test_json_roundtrip():
    for spec in (GroupSpec.hypercube(70), GroupSpec.cyclic(5, 3), s3_table()):
        assert GroupSpec.from_json(spec.to_json()) == spec


def test_orbit_partition_examples():
    assert orbit_partition(GroupSpec.cyclic(4)) == [(0,), (1, 3), (2,)]
    assert orbit_partition(GroupSpec.cyclic(5)) == [(0,), (1, 4), (2, 3)]
    assert all(len(o) == 1 for o in orbit_partition(GroupSpec.hypercube(4)))
    orbits = orbit_partition(s3_table())
    assert sorted(len(o) for o in orbits) == [1, 1, 1, 1, 2]    # identity, three transpositions, 3-cycles
    assert sorted(g for o in orbits for g in o) == list(range(6))


def test_bad_elements_rejected():
    with pytest.raises(GroupError):
        mul(GroupSpec.hypercube(3), 8, 1)
    with pytest.raises(GroupError):
        hamming_class(GroupSpec.cyclic(4), (1,))
    with pytest.raises(GroupError):
        from_signs([1, 0, -1])


@given(d=st.integers(1, 200), seed=st.integers(0, 2 ** 32))
def test_word_helpers(d, seed):
    rng = np.random.default_rng(seed)
    w = hc_random(rng, 5, d)
    ints = hc_to_ints(w)
    assert all(0 <= x < 2 ** d for x in ints)
    assert np.array_equal(hc_from_ints(ints, d), w)
    assert list(hc_popcount(w)) == [bin(x).count("1") for x in ints]
    coords = list(range(0, d, 3))
    mask = hc_to_ints(np.atleast_2d(hc_coordinate_mask(d, coords)))[0]
    assert mask == sum(1 << c for c in coords)


def test_hc_all_enumerates():
    w = hc_all(5)
    assert sorted(hc_to_ints(w)) == list(range(32))
