"""Path-integral Monte Carlo relaxation dynamics.

The quantum model at inverse temperature beta is sampled through the usual
imaginary-time mapping: M replicas ("slices") of the classical configuration,
coupled ferromagnetically along the periodic time direction, with action

    S  =  dtau * sum_m E_cl(slice_m)  -  k_tau * sum_{i,m} s_{i,m} s_{i,m+1},

    dtau = beta / M,      k_tau = ln(coth(dtau * h_x)) / 2.

A sweep performs one Metropolis proposal per (site, slice) pair in a fixed
scan order (sites outer, slices inner), accepting with min(1, exp(-dS)).
Detailed balance therefore holds proposal by proposal for the effective
(d+1)-dimensional classical distribution. With h_x = 0 and M = 1 the time
term drops and exactly the classical single-spin Metropolis chain at
temperature T remains.

Randomness is counter-based and replayable: each chain owns a Philox
generator keyed by ``SeedSequence(seed)``, and sweep t consumes exactly
N*M uniforms in scan order, so the number that decides proposal
(site i, slice m) of sweep t is the (t*N*M + i*M + m)-th draw of the
stream. Identical inputs and seed reproduce trajectories bit for bit,
regardless of how many chains run in parallel elsewhere.

Readout projects the worldline to one classical configuration by per-site
majority vote over slices (ties go to slice 0). One recorded timestep of the
flip-rate observable equals one full sweep.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import ClassicalLimitError
from .lattice import LatticeGeom, build_lattice
from .model import ModelParams, SpinConfig, classical_energy, polaron_density

#: Default minimum number of imaginary-time slices for quantum runs.
DEFAULT_MIN_SLICES = 32

#: Cap on dtau * (local energy scale) used when auto-selecting M.
DEFAULT_ACTION_CAP = 0.3


def trotter_coupling(h_x: float, beta: float, M: int) -> float:
    """Imaginary-time bond coefficient k_tau = ln(coth(beta*h_x/M)) / 2.

    Positive and finite for h_x > 0; diverges as h_x -> 0+ (slices lock
    together, the classical limit).
    """
    if h_x <= 0:
        raise ClassicalLimitError(
            "no imaginary-time coupling exists at h_x <= 0; run the classical "
            "M = 1 chain instead"
        )
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if M < 2:
        raise ValueError(f"need at least 2 slices for a quantum worldline, got {M}")
    x = beta * h_x / M
    return 0.5 * math.log(1.0 / math.tanh(x))


def default_trotter_slices(params: ModelParams, beta: float,
                           minimum: int = DEFAULT_MIN_SLICES,
                           action_cap: float = DEFAULT_ACTION_CAP) -> int:
    """Slice count keeping dtau * max(6J + |h_z|, h_x) below ``action_cap``.

    Used when the caller does not pin M explicitly; bounds the discretization
    error without per-run tuning.
    """
    scale = max(6.0 * params.J + abs(params.h_z), params.h_x)
    return max(minimum, int(math.ceil(beta * scale / action_cap)), 2)


@dataclass
class WorldLine:
    """M coupled replicas of a spin configuration.

    ``slices`` has shape (M, N), int8, periodic along axis 0. ``k_tau`` is
    0.0 in the classical mode (h_x = 0, M = 1).
    """

    geom: LatticeGeom
    params: ModelParams
    beta: float
    slices: np.ndarray = field(repr=False)
    k_tau: float = 0.0

    @property
    def n_slices(self) -> int:
        return self.slices.shape[0]


def init_worldline(config: SpinConfig, M: int, beta: float,
                   params: ModelParams) -> WorldLine:
    """All M slices start as copies of ``config``."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if params.h_x > 0:
        if M < 2:
            raise ValueError(
                f"h_x = {params.h_x} > 0 requires at least 2 slices, got {M}"
            )
        k_tau = trotter_coupling(params.h_x, beta, M)
    else:
        if M != 1:
            raise ClassicalLimitError(
                "h_x = 0 locks all slices together; use M = 1"
            )
        k_tau = 0.0
    slices = np.tile(config.spins, (M, 1)).astype(np.int8)
    return WorldLine(geom=config.geom, params=params, beta=beta,
                     slices=slices, k_tau=k_tau)


@njit(cache=True)
def _sweep_kernel(slices, neighbors, dtau_J, dtau_hz, k_tau, uniforms, flips):
    M, N = slices.shape
    idx = 0
    for i in range(N):
        for m in range(M):
            s = slices[m, i]
            nb = 0
            for k in range(6):
                nb += slices[m, neighbors[i, k]]
            d_action = -2.0 * s * (dtau_J * nb + dtau_hz)
            if M > 1:
                m_up = m + 1 if m + 1 < M else 0
                m_dn = m - 1 if m >= 1 else M - 1
                d_action += 2.0 * k_tau * s * (slices[m_up, i] + slices[m_dn, i])
            if d_action <= 0.0 or uniforms[idx] < np.exp(-d_action):
                slices[m, i] = -s
                flips[m] += 1
            idx += 1


def sweep(state: WorldLine, rng: np.random.Generator) -> tuple[WorldLine, np.ndarray]:
    """One Metropolis pass over all N*M (site, slice) pairs, in place.

    Returns the mutated worldline and the accepted-flip count per slice.
    """
    M, N = state.slices.shape
    dtau = state.beta / M
    uniforms = rng.random(N * M)
    flips = np.zeros(M, dtype=np.int64)
    _sweep_kernel(state.slices, state.geom.neighbors,
                  dtau * state.params.J, dtau * state.params.h_z,
                  state.k_tau, uniforms, flips)
    return state, flips


def project(state: WorldLine) -> SpinConfig:
    """Per-site majority vote across slices; ties take the slice-0 value."""
    totals = state.slices.sum(axis=0, dtype=np.int64)
    out = np.where(totals > 0, 1, -1).astype(np.int8)
    ties = totals == 0
    if ties.any():
        out[ties] = state.slices[0, ties]
    return SpinConfig(state.geom, out)


def chain_rng(seed: int) -> np.random.Generator:
    """The chain's replayable counter-based random stream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


@dataclass
class Trajectory:
    """Projected snapshots of one relaxation chain, one per sweep.

    ``snapshots`` has shape (n_steps + 1, N); row 0 is the initial state.
    ``energies`` and ``densities`` are the classical energy and occupied
    fraction of each snapshot.
    """

    geom: LatticeGeom
    params: ModelParams
    temperature: float
    seed: int
    snapshots: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    densities: np.ndarray = field(repr=False)

    @property
    def n_steps(self) -> int:
        return self.snapshots.shape[0] - 1

    def config(self, t: int) -> SpinConfig:
        return SpinConfig(self.geom, self.snapshots[t].copy())


def run_relaxation(init: SpinConfig, params: ModelParams, T: float,
                   M: int | None, n_steps: int, seed: int) -> Trajectory:
    """Run ``n_steps`` sweeps from ``init`` at temperature T.

    M = None selects :func:`default_trotter_slices` (or 1 when h_x = 0).
    Deterministic in all inputs and the seed.
    """
    if T <= 0:
        raise ValueError(f"temperature must be positive, got {T}")
    if n_steps < 1:
        raise ValueError(f"need at least one sweep, got {n_steps}")
    beta = 1.0 / T
    if M is None:
        M = 1 if params.h_x == 0 else default_trotter_slices(params, beta)

    state = init_worldline(init, M, beta, params)
    rng = chain_rng(seed)

    n = init.geom.n_sites
    snapshots = np.empty((n_steps + 1, n), dtype=np.int8)
    energies = np.empty(n_steps + 1)
    densities = np.empty(n_steps + 1)

    def record(t: int) -> None:
        cfg = project(state)
        snapshots[t] = cfg.spins
        energies[t] = classical_energy(cfg, params)
        densities[t] = polaron_density(cfg)

    record(0)
    for t in range(1, n_steps + 1):
        sweep(state, rng)
        record(t)

    return Trajectory(geom=init.geom, params=params, temperature=T, seed=seed,
                      snapshots=snapshots, energies=energies, densities=densities)


# --- trajectory persistence ---------------------------------------------------

def trajectory_jsonl(traj: Trajectory) -> str:
    """One JSON line per sweep: the snapshot plus sweep index, energy, density."""
    lines = []
    for t in range(traj.n_steps + 1):
        record = {
            "width": traj.geom.width,
            "height": traj.geom.height,
            "spins": [int(s) for s in traj.snapshots[t]],
            "sweep": t,
            "energy": traj.energies[t],
            "density": traj.densities[t],
        }
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + "\n"


def trajectory_from_jsonl(text: str, params: ModelParams, T: float,
                          seed: int) -> Trajectory:
    """Rebuild a trajectory from its JSON-lines serialization."""
    rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty trajectory file")
    geom = build_lattice(rows[0]["width"], rows[0]["height"])
    snapshots = np.array([r["spins"] for r in rows], dtype=np.int8)
    energies = np.array([r["energy"] for r in rows])
    densities = np.array([r["density"] for r in rows])
    return Trajectory(geom=geom, params=params, temperature=T, seed=seed,
                      snapshots=snapshots, energies=energies, densities=densities)
