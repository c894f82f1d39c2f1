"""Dense exact diagonalization of small spin clusters.

This is the brute-force validation route for the effective hopping theory:
build the full quantum Hamiltonian

    H = J * sum_bonds sz_i sz_j - h_x * sum_i sx_i + sum_i (h_z + f_i) sz_i

on a cluster of N <= 16 sites (computational sz product basis, bit i set in
the basis index <=> spin i is +1) and read tunneling amplitudes straight off
the spectrum. The per-site shifts f_i encode frozen boundary spins of an
embedding as local longitudinal fields, which reproduces arbitrary local
environments without enlarging the Hilbert space.

Dense symmetric diagonalization only: at these sizes there is no reason to
accept the convergence ambiguity of iterative solvers in an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DegenerateFitError, PairDegeneracyError
from .lattice import LatticeGeom
from .model import ModelParams, SpinConfig
from .swtheory import SWSubspace

MAX_SITES = 16


@dataclass(frozen=True)
class Cluster:
    """An explicit small system: sites, bonds and frozen-environment fields.

    ``local_fields`` are added to h_z per site (energy units); use them to
    freeze boundary spins of a larger lattice into the cluster.
    """

    n_sites: int
    bonds: tuple[tuple[int, int], ...]
    local_fields: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("cluster needs at least one site")
        for i, j in self.bonds:
            if not (0 <= i < self.n_sites and 0 <= j < self.n_sites) or i == j:
                raise ValueError(f"invalid bond ({i}, {j}) for {self.n_sites} sites")
        if self.local_fields is not None and len(self.local_fields) != self.n_sites:
            raise ValueError("local_fields length must equal n_sites")


@dataclass(frozen=True)
class DenseHamiltonian:
    """Full real-symmetric matrix in the sz product basis."""

    matrix: np.ndarray = field(repr=False)
    n_sites: int = 0
    bonds: tuple[tuple[int, int], ...] = ()

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def cluster_from_lattice(geom: LatticeGeom) -> Cluster:
    return Cluster(
        n_sites=geom.n_sites,
        bonds=tuple((int(i), int(j)) for i, j in geom.bonds),
    )


def basis_spins(n_sites: int) -> np.ndarray:
    """(2^N, N) array of +1/-1 spins; bit i of the row index gives spin i."""
    idx = np.arange(1 << n_sites, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n_sites)) & 1
    return (2 * bits - 1).astype(np.int8)


def build_hamiltonian(system: LatticeGeom | Cluster, params: ModelParams) -> DenseHamiltonian:
    """Dense Hamiltonian of the cluster; diagonal = classical energies,
    off-diagonal = -h_x between basis states one spin flip apart."""
    cluster = cluster_from_lattice(system) if isinstance(system, LatticeGeom) else system
    n = cluster.n_sites
    if n > MAX_SITES:
        raise CapacityError(
            f"{n} sites exceeds the dense-diagonalization cap of {MAX_SITES}"
        )
    dim = 1 << n
    s = basis_spins(n).astype(np.float64)

    fields = np.full(n, params.h_z)
    if cluster.local_fields is not None:
        fields = fields + np.asarray(cluster.local_fields, dtype=np.float64)

    diag = s @ fields
    for i, j in cluster.bonds:
        diag += params.J * s[:, i] * s[:, j]

    H = np.zeros((dim, dim))
    np.fill_diagonal(H, diag)
    if params.h_x != 0.0:
        idx = np.arange(dim)
        for i in range(n):
            H[idx, idx ^ (1 << i)] = -params.h_x
    return DenseHamiltonian(matrix=H, n_sites=n, bonds=cluster.bonds)


def low_spectrum(ham: DenseHamiltonian, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k lowest eigenvalues (ascending) and their eigenvectors as columns."""
    if not 1 <= k <= ham.dimension:
        raise ValueError(f"k must be in [1, {ham.dimension}], got {k}")
    vals, vecs = np.linalg.eigh(ham.matrix)
    return vals[:k], vecs[:, :k]


def state_index(state: SpinConfig | Sequence[int] | int) -> int:
    """Basis index of a classical state (bit i set <=> spin i is +1)."""
    if isinstance(state, (int, np.integer)):
        return int(state)
    spins = state.spins if isinstance(state, SpinConfig) else np.asarray(state)
    return int(sum(1 << i for i, s in enumerate(spins) if s == 1))


def tunneling_splitting(ham: DenseHamiltonian,
                        state_a: SpinConfig | Sequence[int] | int,
                        state_b: SpinConfig | Sequence[int] | int) -> float:
    """Half the energy splitting of the doublet built on two degenerate
    classical states that exchange one occupied and one empty site.

    The doublet is identified as the eigenvectors whose combined weight on
    the two target basis states exceeds 1/2; exactly two must qualify, which
    fails loudly when the pair hybridizes with other states (gap too small
    for a clean second-order picture).
    """
    ia, ib = state_index(state_a), state_index(state_b)
    if ia == ib:
        raise PairDegeneracyError("the two states are identical")
    ea, eb = ham.matrix[ia, ia], ham.matrix[ib, ib]
    if abs(ea - eb) > 1e-9:
        raise PairDegeneracyError(
            f"classical energies differ by {abs(ea - eb):.3g} > 1e-9; "
            "the pair is not degenerate"
        )
    diff = ia ^ ib
    if bin(diff).count("1") != 2 or bin(ia).count("1") != bin(ib).count("1"):
        raise PairDegeneracyError(
            "states must differ by moving one occupied site onto one empty site"
        )
    if ham.bonds:
        moved = tuple(sorted(i for i in range(ham.n_sites) if diff >> i & 1))
        normalized = {tuple(sorted(b)) for b in ham.bonds}
        if moved not in normalized:
            raise PairDegeneracyError(
                f"exchange sites {moved} are not bonded in this cluster"
            )

    vals, vecs = np.linalg.eigh(ham.matrix)
    weight = vecs[ia, :] ** 2 + vecs[ib, :] ** 2
    doublet = np.flatnonzero(weight > 0.5)
    if len(doublet) != 2:
        raise PairDegeneracyError(
            f"expected a clean 2-state doublet, found {len(doublet)} dominant "
            "eigenvectors; virtual states are not gapped away"
        )
    return 0.5 * float(abs(vals[doublet[0]] - vals[doublet[1]]))


def sw_pair_hamiltonian(sub: SWSubspace) -> DenseHamiltonian:
    """The two-site subspace H0 + V packaged as a dense 2-site Hamiltonian.

    The subspace basis (|-1,-1>, |-1,+1>, |+1,-1>, |+1,+1>) coincides with
    the bit-pattern basis up to swapping the two middle states, under which
    both H0 and V are invariant, so the matrix carries over unchanged. The
    degenerate pair lives at basis indices 1 and 2.
    """
    return DenseHamiltonian(matrix=sub.H0 + sub.V, n_sites=2, bonds=((0, 1),))


def wall_pair_cluster(J: float, frozen_spin_sum: int) -> Cluster:
    """Two bonded active sites inside a frozen background.

    Each active site sees the same net frozen-neighbor spin sum F (an odd
    integer in [-5, 5] for a triangular-lattice pair), entering as the local
    field J*F. The resulting virtual gaps match coordination counts
    Z_h = 1 - F and Z_p = -1 - F.
    """
    f = J * float(frozen_spin_sum)
    return Cluster(n_sites=2, bonds=((0, 1),), local_fields=(f, f))


def fit_hopping_exponent(h_x_values: Iterable[float], t_values: Iterable[float]) -> float:
    """Least-squares slope of log t versus log h_x."""
    h = np.asarray(list(h_x_values), dtype=np.float64)
    t = np.asarray(list(t_values), dtype=np.float64)
    if h.shape != t.shape or h.size < 3:
        raise DegenerateFitError("need at least 3 matched (h_x, t) points")
    if np.any(h <= 0) or np.any(t == 0):
        raise DegenerateFitError("log-log fit undefined for zero amplitudes")
    slope, _ = np.polyfit(np.log(h), np.log(np.abs(t)), 1)
    return float(slope)
