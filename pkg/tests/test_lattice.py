"""Geometry tests, all against brute-force enumeration at desk sizes."""

import numpy as np
import pytest

from polaron_tfim.errors import CommensurabilityError, SizeError
from polaron_tfim.lattice import (
    NEIGHBOR_OFFSETS,
    SUBLATTICE_LABELS,
    build_lattice,
    neighbors,
    sublattice_of,
)


def brute_force_bonds(width, height):
    """Independent bond enumeration: unordered pairs from raw displacement
    arithmetic, no shared code with the lattice module."""
    offsets = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)]
    pairs = set()
    for y in range(height):
        for x in range(width):
            i = x + width * y
            for dx, dy in offsets:
                j = ((x + dx) % width) + width * ((y + dy) % height)
                pairs.add((min(i, j), max(i, j)))
    return pairs


def test_3x3_counts_match_brute_force():
    geom = build_lattice(3, 3)
    assert geom.n_sites == 9
    expected = brute_force_bonds(3, 3)
    assert len(expected) == 27
    got = {(int(i), int(j)) for i, j in geom.bonds}
    assert got == expected
    counts = [int(np.sum(geom.sublattice == k)) for k in range(3)]
    assert counts == [3, 3, 3]


def test_6x6_bond_count():
    geom = build_lattice(6, 6)
    assert geom.n_sites == 36
    assert geom.bonds.shape == (108, 2)  # 3N bonds on a 6-coordinated torus


@pytest.mark.parametrize("w,h,exc", [
    (4, 6, CommensurabilityError),
    (6, 4, CommensurabilityError),
    (2, 6, SizeError),
    (3, 1, SizeError),
])
def test_bad_dimensions(w, h, exc):
    with pytest.raises(exc):
        build_lattice(w, h)


def test_neighbors_distinct_no_self():
    geom = build_lattice(3, 3)
    for i in range(geom.n_sites):
        nbr = neighbors(geom, i)
        assert len(set(nbr.tolist())) == 6
        assert i not in nbr


def test_neighbor_pairs_tile_with_multiplicity_two():
    # Each unordered pair of neighboring sites appears in exactly two rows.
    geom = build_lattice(3, 3)
    from collections import Counter
    c = Counter()
    for i in range(geom.n_sites):
        for j in neighbors(geom, i):
            c[(min(i, int(j)), max(i, int(j)))] += 1
    assert all(v == 2 for v in c.values())
    assert len(c) == 27


def test_neighbor_symmetry_6x6():
    geom = build_lattice(6, 6)
    for i in range(geom.n_sites):
        for j in neighbors(geom, i):
            assert i in neighbors(geom, int(j))


def test_neighbor_order_is_documented():
    geom = build_lattice(6, 6)
    for i in range(geom.n_sites):
        x, y = geom.site_xy(i)
        for k, (dx, dy) in enumerate(NEIGHBOR_OFFSETS):
            assert geom.neighbors[i, k] == geom.site_index(x + dx, y + dy)


def test_coloring_proper_on_every_bond_6x6():
    geom = build_lattice(6, 6)
    for i, j in geom.bonds:
        assert sublattice_of(geom, int(i)) != sublattice_of(geom, int(j))


def test_equal_partition():
    geom = build_lattice(3, 3)
    labels = [sublattice_of(geom, i) for i in range(9)]
    assert sorted(labels) == ["A", "A", "A", "B", "B", "B", "C", "C", "C"]


@pytest.mark.parametrize("dx,dy", [(1, 0), (0, 1)])
def test_translation_permutes_labels_cyclically(dx, dy):
    geom = build_lattice(6, 6)
    perm = {}
    for i in range(geom.n_sites):
        x, y = geom.site_xy(i)
        a = sublattice_of(geom, i)
        b = sublattice_of(geom, geom.site_index(x + dx, y + dy))
        perm.setdefault(a, b)
        assert perm[a] == b  # translation acts as one global permutation
    # cyclic: following the permutation three times returns to start,
    # and no label is fixed
    for a in SUBLATTICE_LABELS:
        assert perm[a] != a
        assert perm[perm[perm[a]]] == a


def test_index_out_of_range():
    geom = build_lattice(3, 3)
    with pytest.raises(IndexError):
        neighbors(geom, 9)
    with pytest.raises(IndexError):
        sublattice_of(geom, -1)
