"""Energy and configuration tests against direct bond-summation oracles."""

import json

import numpy as np
import pytest

from polaron_tfim.errors import DegenerateWallError, GeometryMismatchError
from polaron_tfim.lattice import build_lattice
from polaron_tfim.model import (
    ModelParams,
    SpinConfig,
    classical_energy,
    config_from_snapshot,
    domain_wall_config,
    energy_split,
    flip_cost,
    ground_state,
    polaron_density,
    snapshot_json,
)


def oracle_energy(config, J, h_z):
    """Direct per-site loop over neighbor lists, each bond counted half twice."""
    s = config.spins
    geom = config.geom
    bond_sum = 0.0
    for i in range(geom.n_sites):
        for j in geom.neighbors[i]:
            bond_sum += 0.5 * float(s[i]) * float(s[j])
    return J * bond_sum + h_z * float(s.sum())


@pytest.fixture(scope="module")
def geom66():
    return build_lattice(6, 6)


def random_config(geom, rng):
    return SpinConfig(geom, rng.choice([-1, 1], size=geom.n_sites))


def test_uniform_energy(geom66):
    params = ModelParams(J=1.0, h_z=0.0)
    cfg = SpinConfig(geom66, -np.ones(36, dtype=np.int8))
    assert classical_energy(cfg, params) == 108.0


def test_ground_state_energy(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    cfg = ground_state(geom66, "A")
    assert classical_energy(cfg, params) == -60.0
    assert classical_energy(cfg, params) == pytest.approx(
        oracle_energy(cfg, 1.0, 2.0), abs=1e-12)


def test_energy_matches_oracle_on_random_configs(geom66):
    rng = np.random.default_rng(7)
    params = ModelParams(J=1.3, h_z=0.7)
    for _ in range(25):
        cfg = random_config(geom66, rng)
        assert classical_energy(cfg, params) == pytest.approx(
            oracle_energy(cfg, 1.3, 0.7), abs=1e-10)


def test_translation_symmetry(geom66):
    # Shifting by a primitive vector and relabeling A->B->C->A preserves energy.
    params = ModelParams(J=1.0, h_z=2.0)
    rng = np.random.default_rng(3)
    cfg = random_config(geom66, rng)
    shifted = np.empty_like(cfg.spins)
    for i in range(geom66.n_sites):
        x, y = geom66.site_xy(i)
        shifted[geom66.site_index(x + 1, y)] = cfg.spins[i]
    assert classical_energy(SpinConfig(geom66, shifted), params) == pytest.approx(
        classical_energy(cfg, params), abs=1e-12)
    gs_b = ground_state(geom66, "B")
    shifted_a = np.empty_like(gs_b.spins)
    for i in range(geom66.n_sites):
        x, y = geom66.site_xy(i)
        shifted_a[geom66.site_index(x + 1, y)] = ground_state(geom66, "A").spins[i]
    assert np.array_equal(shifted_a, gs_b.spins)  # shift by a1 maps A onto B


def test_energy_split_values(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    uniform = SpinConfig(geom66, -np.ones(36, dtype=np.int8))
    assert energy_split(uniform, params) == (108.0, -72.0)
    assert energy_split(ground_state(geom66, "A"), params) == (-36.0, -24.0)


def test_energy_split_sums_to_total(geom66):
    rng = np.random.default_rng(11)
    params = ModelParams(J=0.8, h_z=1.9)
    for _ in range(1000):
        cfg = random_config(geom66, rng)
        inter, chem = energy_split(cfg, params)
        assert inter + chem == pytest.approx(classical_energy(cfg, params), abs=1e-12)


def test_flip_cost_examples(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    gs = ground_state(geom66, "A")
    b_site = int(np.flatnonzero(geom66.sublattice == 1)[0])
    a_site = int(np.flatnonzero(geom66.sublattice == 0)[0])
    assert flip_cost(gs, b_site, params) == 4.0   # neighbor sum 0 -> 2 h_z
    assert flip_cost(gs, a_site, params) == 8.0   # neighbor sum -6 -> 12J - 2h_z


def test_flip_cost_equals_energy_difference(geom66):
    rng = np.random.default_rng(13)
    params = ModelParams(J=1.1, h_z=2.3)
    for _ in range(1000):
        cfg = random_config(geom66, rng)
        i = int(rng.integers(0, geom66.n_sites))
        before = classical_energy(cfg, params)
        flipped = cfg.copy()
        flipped.spins[i] *= -1
        after = classical_energy(flipped, params)
        assert flip_cost(cfg, i, params) == pytest.approx(after - before, abs=1e-10)
        assert flip_cost(flipped, i, params) == pytest.approx(before - after, abs=1e-10)


def test_flip_cost_index_error(geom66):
    with pytest.raises(IndexError):
        flip_cost(ground_state(geom66, "A"), 36, ModelParams())


def test_ground_states_degenerate(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    energies = [classical_energy(ground_state(geom66, w), params) for w in "ABC"]
    assert energies == [-60.0, -60.0, -60.0]
    assert polaron_density(ground_state(geom66, "B")) == pytest.approx(1 / 3)


@pytest.mark.parametrize("h_z", [1.0, 2.0, 5.0])
def test_ordered_state_beats_uniform_inside_window(geom66, h_z):
    # 0 < h_z < 6J window for the 1/3 state to undercut both uniform states
    params = ModelParams(J=1.0, h_z=h_z)
    e_gs = classical_energy(ground_state(geom66, "A"), params)
    e_dn = classical_energy(SpinConfig(geom66, -np.ones(36, dtype=np.int8)), params)
    e_up = classical_energy(SpinConfig(geom66, np.ones(36, dtype=np.int8)), params)
    assert e_gs < e_dn
    assert e_gs < e_up


def test_any_single_flip_raises_energy_from_ground_state(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    gs = ground_state(geom66, "C")
    assert all(flip_cost(gs, i, params) > 0 for i in range(geom66.n_sites))


def test_domain_wall_density_deficit(geom66):
    wall = domain_wall_config(geom66, "A", "B", 3)
    # 12 ordered-state polarons minus one per interface row on two interfaces
    assert int(np.count_nonzero(wall.spins == 1)) == 8
    assert polaron_density(wall) == pytest.approx(8 / 36)
    assert polaron_density(wall) < 1 / 3


def test_domain_wall_has_no_adjacent_polarons(geom66):
    wall = domain_wall_config(geom66, "A", "C", 3)
    s = wall.spins
    for i, j in geom66.bonds:
        assert not (s[i] == 1 and s[j] == 1)


def test_domain_wall_energy_above_ground_state(geom66):
    params = ModelParams(J=1.0, h_z=2.0)
    e_wall = classical_energy(domain_wall_config(geom66, "A", "B", 3), params)
    e_gs = classical_energy(ground_state(geom66, "A"), params)
    assert e_wall > e_gs
    assert e_wall == pytest.approx(
        oracle_energy(domain_wall_config(geom66, "A", "B", 3), 1.0, 2.0), abs=1e-12)


def test_degenerate_wall_rejected(geom66):
    with pytest.raises(DegenerateWallError):
        domain_wall_config(geom66, "A", "A", 3)


def test_wall_column_bounds(geom66):
    with pytest.raises(ValueError):
        domain_wall_config(geom66, "A", "B", 0)
    with pytest.raises(ValueError):
        domain_wall_config(geom66, "A", "B", 6)


def test_polaron_density_values(geom66):
    assert polaron_density(SpinConfig(geom66, -np.ones(36, dtype=np.int8))) == 0.0
    one_extra = ground_state(geom66, "A").copy()
    empty_site = int(np.flatnonzero(one_extra.spins == -1)[0])
    one_extra.spins[empty_site] = 1
    assert polaron_density(one_extra) == pytest.approx(13 / 36)


def test_geometry_mismatch():
    geom = build_lattice(3, 3)
    with pytest.raises(GeometryMismatchError):
        SpinConfig(geom, np.ones(8, dtype=np.int8))


def test_snapshot_round_trip(geom66):
    cfg = domain_wall_config(geom66, "B", "C", 4)
    data = json.loads(snapshot_json(cfg))
    assert data["width"] == 6 and data["height"] == 6
    back = config_from_snapshot(data, geom66)
    assert np.array_equal(back.spins, cfg.spins)
    rebuilt = config_from_snapshot(data)  # fresh geometry path
    assert np.array_equal(rebuilt.spins, cfg.spins)
    with pytest.raises(GeometryMismatchError):
        config_from_snapshot(data, build_lattice(3, 3))
