"""Classical sector of the biased triangular-lattice Ising antiferromagnet.

The energy function is

    E(s) = J * sum_bonds s_i s_j + h_z * sum_i s_i,      s_i in {-1, +1},

with J > 0 and each unordered bond counted once. A +1 spin marks an occupied
(polaron) site. For 0 < h_z < 6J the lowest-energy uniform-or-sublattice
configuration is the 1/3-filled state with one sublattice occupied: its
energy per site is -J - h_z/3, versus 3J - h_z (all empty) and 3J + h_z
(all occupied), so the occupied-sublattice state wins exactly on that window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateWallError, GeometryMismatchError
from .lattice import SUBLATTICE_LABELS, LatticeGeom, build_lattice


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the spin model (energy units; Boltzmann constant = 1).

    J is the antiferromagnetic bond coupling, h_x the transverse field and
    h_z the longitudinal bias acting as a polaron chemical potential.
    """

    J: float = 1.0
    h_x: float = 0.0
    h_z: float = 2.0

    def __post_init__(self):
        if self.J <= 0:
            raise ValueError(f"J must be positive (antiferromagnetic), got {self.J}")
        if self.h_x < 0:
            raise ValueError(f"h_x must be non-negative, got {self.h_x}")


@dataclass
class SpinConfig:
    """A classical spin state on a lattice geometry.

    ``spins`` is an int8 array of +1/-1 in site-index order.
    """

    geom: LatticeGeom
    spins: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.spins = np.asarray(self.spins, dtype=np.int8)
        if self.spins.shape != (self.geom.n_sites,):
            raise GeometryMismatchError(
                f"spin array of shape {self.spins.shape} does not match "
                f"{self.geom.width}x{self.geom.height} lattice"
            )
        if not np.all(np.abs(self.spins) == 1):
            raise ValueError("spins must all be +1 or -1")

    def copy(self) -> "SpinConfig":
        return SpinConfig(self.geom, self.spins.copy())


def classical_energy(config: SpinConfig, params: ModelParams) -> float:
    """Total energy J * sum_bonds s_i s_j + h_z * sum_i s_i."""
    interaction, chemical = energy_split(config, params)
    return interaction + chemical


def energy_split(config: SpinConfig, params: ModelParams) -> tuple[float, float]:
    """(interaction, chemical) energy components; they sum to classical_energy."""
    s = config.spins.astype(np.float64)
    b = config.geom.bonds
    interaction = params.J * float(np.sum(s[b[:, 0]] * s[b[:, 1]]))
    chemical = params.h_z * float(np.sum(s))
    return interaction, chemical


def flip_cost(config: SpinConfig, i: int, params: ModelParams) -> float:
    """Energy change from flipping spin i: -2 s_i (J * sum_nbr s_j + h_z)."""
    if not 0 <= i < config.geom.n_sites:
        raise IndexError(f"site index {i} out of range")
    nbr_sum = float(config.spins[config.geom.neighbors[i]].sum())
    return -2.0 * float(config.spins[i]) * (params.J * nbr_sum + params.h_z)


def ground_state(geom: LatticeGeom, which: str) -> SpinConfig:
    """Ordered 1/3-filled state with sublattice ``which`` occupied.

    The three choices "A", "B", "C" are degenerate in energy.
    """
    label = _label_index(which)
    spins = np.where(geom.sublattice == label, 1, -1).astype(np.int8)
    return SpinConfig(geom, spins)


def domain_wall_config(geom: LatticeGeom, left: str, right: str,
                       wall_column: int) -> SpinConfig:
    """Two ordered domains split at a vertical interface.

    Columns x < wall_column carry the ``left`` ordering, the rest the
    ``right`` ordering; the periodic wrap makes a second interface between
    column W-1 and column 0. Wherever the raw split would place two occupied
    sites on adjacent sites across an interface, the occupied site on the
    ``right``-domain side is emptied. This reproduces the one-site
    misalignment geometry of real walls, which carry a polaron deficit: the
    resulting density is 1/3 - 2/(3W), strictly below the ordered state's 1/3.
    """
    li, ri = _label_index(left), _label_index(right)
    if li == ri:
        raise DegenerateWallError(
            f"left and right orderings are both {left!r}; no wall exists"
        )
    if not 0 < wall_column < geom.width:
        raise ValueError(
            f"wall_column must lie strictly inside (0, {geom.width}), got {wall_column}"
        )

    x = np.arange(geom.n_sites) % geom.width
    in_right = x >= wall_column
    label = np.where(in_right, ri, li)
    spins = np.where(geom.sublattice == label, 1, -1).astype(np.int8)

    # Empty the right-domain member of every occupied pair that straddles
    # either interface (bonds only ever connect columns differing by one).
    b = geom.bonds
    bx0, bx1 = x[b[:, 0]], x[b[:, 1]]
    seam = (np.minimum(bx0, bx1) == wall_column - 1) & (np.maximum(bx0, bx1) == wall_column)
    wrap = (np.minimum(bx0, bx1) == 0) & (np.maximum(bx0, bx1) == geom.width - 1)
    crossing = b[(seam | wrap) & (spins[b[:, 0]] == 1) & (spins[b[:, 1]] == 1)]
    for i, j in crossing:
        victim = i if in_right[i] else j
        spins[victim] = -1

    return SpinConfig(geom, spins)


def polaron_density(config: SpinConfig) -> float:
    """Fraction of occupied (+1) sites."""
    return float(np.count_nonzero(config.spins == 1)) / config.geom.n_sites


def _label_index(which: str) -> int:
    try:
        return SUBLATTICE_LABELS.index(which)
    except ValueError:
        raise ValueError(
            f"sublattice label must be one of {SUBLATTICE_LABELS}, got {which!r}"
        ) from None


# --- snapshot serialization -------------------------------------------------

def snapshot_dict(config: SpinConfig) -> dict:
    """JSON-ready snapshot: {"width": W, "height": H, "spins": [...]}."""
    return {
        "width": config.geom.width,
        "height": config.geom.height,
        "spins": [int(s) for s in config.spins],
    }


def snapshot_json(config: SpinConfig) -> str:
    return json.dumps(snapshot_dict(config), sort_keys=True)


def config_from_snapshot(data: dict, geom: LatticeGeom | None = None) -> SpinConfig:
    """Rebuild a SpinConfig from a snapshot dict.

    A geometry may be supplied to share one instance across many snapshots;
    it must match the recorded dimensions.
    """
    w, h = int(data["width"]), int(data["height"])
    if geom is None:
        geom = build_lattice(w, h)
    elif (geom.width, geom.height) != (w, h):
        raise GeometryMismatchError(
            f"snapshot is {w}x{h} but geometry is {geom.width}x{geom.height}"
        )
    return SpinConfig(geom, np.asarray(data["spins"], dtype=np.int8))
