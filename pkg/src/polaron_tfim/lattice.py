"""Triangular-lattice geometry on a periodic rhombus.

Sites live on a W x H rhombic torus in skew coordinates: site (x, y) has
linear index ``x + W * y``. The six neighbors of (x, y), in the fixed order
used everywhere in this package, are

    ==  ============  ==  ============
    0   E  (x+1, y)   1   W  (x-1, y)
    2   NE (x, y+1)   3   SW (x, y-1)
    4   NW (x-1,y+1)  5   SE (x+1,y-1)
    ==  ============  ==  ============

with periodic wrap in both directions. The tripartite sublattice label of
(x, y) is ``(x - y) mod 3`` mapped to "A", "B", "C"; with the neighbor set
above this is a proper 3-coloring, and translating by one primitive lattice
vector permutes the labels cyclically. Both dimensions must be multiples of
3 so the coloring closes around the torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CommensurabilityError, SizeError

#: Neighbor displacements (dx, dy) in skew coordinates, order E, W, NE, SW, NW, SE.
NEIGHBOR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1))

#: Sublattice labels indexed by (x - y) mod 3.
SUBLATTICE_LABELS = ("A", "B", "C")


@dataclass(frozen=True)
class LatticeGeom:
    """Immutable triangular-torus geometry.

    Attributes:
        width: number of sites along the first primitive direction.
        height: number of sites along the second primitive direction.
        neighbors: (N, 6) int array, row i = neighbor indices of site i in
            the documented order.
        sublattice: (N,) int array with values 0/1/2 for labels A/B/C.
        bonds: (3N, 2) int array of unordered bonds as (i, j) with i < j,
            sorted lexicographically. Each bond appears exactly once.
    """

    width: int
    height: int
    neighbors: np.ndarray = field(repr=False)
    sublattice: np.ndarray = field(repr=False)
    bonds: np.ndarray = field(repr=False)

    @property
    def n_sites(self) -> int:
        return self.width * self.height

    def site_index(self, x: int, y: int) -> int:
        """Linear index of skew coordinates (x, y), wrapped periodically."""
        return (x % self.width) + self.width * (y % self.height)

    def site_xy(self, i: int) -> tuple[int, int]:
        """Skew coordinates (x, y) of site index i."""
        return i % self.width, i // self.width


def build_lattice(width: int, height: int) -> LatticeGeom:
    """Construct the periodic triangular lattice.

    Both dimensions must be >= 3 and multiples of 3 (otherwise the
    three-sublattice order cannot wrap consistently).
    """
    for name, dim in (("width", width), ("height", height)):
        if dim < 3:
            raise SizeError(f"{name} must be at least 3, got {dim}")
        if dim % 3 != 0:
            raise CommensurabilityError(
                f"{name} must be a multiple of 3 for the three-sublattice "
                f"order to close periodically, got {dim}"
            )

    n = width * height
    neigh = np.empty((n, 6), dtype=np.int32)
    sub = np.empty(n, dtype=np.int8)
    for y in range(height):
        for x in range(width):
            i = x + width * y
            sub[i] = (x - y) % 3
            for k, (dx, dy) in enumerate(NEIGHBOR_OFFSETS):
                neigh[i, k] = ((x + dx) % width) + width * ((y + dy) % height)

    # Each unordered bond appears once in each endpoint's neighbor row;
    # keeping i < j retains exactly one copy.
    rows = np.repeat(np.arange(n, dtype=np.int32), 6)
    cols = neigh.reshape(-1)
    mask = rows < cols
    bonds = np.stack([rows[mask], cols[mask]], axis=1)
    order = np.lexsort((bonds[:, 1], bonds[:, 0]))
    bonds = np.ascontiguousarray(bonds[order])

    return LatticeGeom(width=width, height=height, neighbors=neigh,
                       sublattice=sub, bonds=bonds)


def neighbors(geom: LatticeGeom, i: int) -> np.ndarray:
    """The 6 neighbor indices of site i in the documented fixed order."""
    if not 0 <= i < geom.n_sites:
        raise IndexError(f"site index {i} out of range for {geom.n_sites} sites")
    return geom.neighbors[i].copy()


def sublattice_of(geom: LatticeGeom, i: int) -> str:
    """Sublattice label ("A", "B" or "C") of site i."""
    if not 0 <= i < geom.n_sites:
        raise IndexError(f"site index {i} out of range for {geom.n_sites} sites")
    return SUBLATTICE_LABELS[geom.sublattice[i]]
