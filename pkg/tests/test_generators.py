import numpy as np
import pytest

from privroute.generators import (
    GraphSpec,
    apply_sparsity,
    build_graph,
    generate_grid,
    generate_scale_free,
    generate_wheel,
)


# --- GraphSpec validation ----------------------------------------------------


def test_spec_rejects_unknown_family():
    with pytest.raises(ValueError):
        GraphSpec(family="torus", n=5, weight_seed=1)


def test_spec_class_specific_params():
    with pytest.raises(ValueError):
        GraphSpec(family="grid", n=5, weight_seed=1, r=2.0)
    with pytest.raises(ValueError):
        GraphSpec(family="wheel", n=5, weight_seed=1)  # missing r
    with pytest.raises(ValueError):
        GraphSpec(family="scale_free", n=5, weight_seed=1, gamma=2.0)  # no topo seed
    with pytest.raises(ValueError):
        GraphSpec(family="grid", n=5, weight_seed=1, sparsity=1.5)


# --- grids --------------------------------------------------------------------


def test_grid_2x2_counts():
    g = generate_grid(2, 0)
    assert g.node_count == 4
    assert g.edge_count == 4


def test_grid_10_has_100_nodes():
    g = generate_grid(10, 0)
    assert g.node_count == 100
    assert g.edge_count == 2 * 10 * 9


def test_grid_weights_in_unit_interval():
    g = generate_grid(6, 123)
    assert all(0.0 <= w <= 1.0 for _, _, w in g.edges)


def test_grid_degrees():
    g = generate_grid(5, 3)
    degree = [0] * g.node_count
    for u, v, _ in g.edges:
        degree[u] += 1
        degree[v] += 1
    assert set(degree) <= {2, 3, 4}


def test_grid_rejects_tiny():
    with pytest.raises(ValueError):
        generate_grid(1, 0)


# --- wheels -------------------------------------------------------------------


def test_wheel_counts():
    g = generate_wheel(10, 2.0, 0)
    assert g.node_count == 10
    assert g.edge_count == 18  # 9 spokes + 9 rim edges


def test_wheel_101_matches_experiment_size():
    g = generate_wheel(101, 100.0, 0)
    assert g.node_count == 101
    assert g.edge_count == 200


def test_wheel_degrees():
    g = generate_wheel(12, 5.0, 9)
    degree = [0] * g.node_count
    for u, v, _ in g.edges:
        degree[u] += 1
        degree[v] += 1
    assert degree[0] == 11
    assert all(d == 3 for d in degree[1:])


def test_wheel_weight_ranges():
    r = 50.0
    g = generate_wheel(30, r, 77)
    for u, v, w in g.edges:
        if u == 0:
            assert 0.0 <= w <= r
        else:
            assert 0.0 <= w <= 1.0


def test_wheel_r1_spokes_match_rim_distribution():
    # r=1 makes spokes Uniform[0,1] too
    g = generate_wheel(200, 1.0, 5)
    spokes = [w for u, _, w in g.edges if u == 0]
    assert all(0.0 <= w <= 1.0 for w in spokes)


def test_wheel_rejects_bad_params():
    with pytest.raises(ValueError):
        generate_wheel(3, 2.0, 0)
    with pytest.raises(ValueError):
        generate_wheel(10, 0.5, 0)


# --- scale-free ---------------------------------------------------------------


def test_scale_free_connected():
    for seed in range(5):
        g = generate_scale_free(100, 2.0, seed, seed)
        assert g.is_connected()
        assert g.node_count <= 100


def _median_density(gamma: float, seeds: int = 100) -> float:
    ratios = []
    for seed in range(seeds):
        g = generate_scale_free(100, gamma, seed, 1)
        ratios.append(g.edge_count / g.node_count)
    return float(np.median(ratios))


def test_scale_free_gamma3_tree_like():
    assert _median_density(3.0) < 1.5


def test_scale_free_low_gamma_denser():
    assert _median_density(1.1) > _median_density(3.0)


def test_scale_free_rejects_bad_params():
    with pytest.raises(ValueError):
        generate_scale_free(2, 2.0, 0, 0)
    with pytest.raises(ValueError):
        generate_scale_free(10, 1.0, 0, 0)


# --- sparsity -----------------------------------------------------------------


def test_sparsity_zero_is_identity():
    g = generate_grid(4, 8)
    assert apply_sparsity(g, 0.0, 1) == g


def test_sparsity_one_zeroes_everything():
    g = generate_grid(4, 8)
    out = apply_sparsity(g, 1.0, 1)
    assert all(w == 0.0 for _, _, w in out.edges)


def test_sparsity_exact_count():
    g = generate_grid(10, 8)  # 180 edges
    out = apply_sparsity(g, 0.5, 3)
    zeros = sum(1 for _, _, w in out.edges if w == 0.0)
    assert zeros == 90


def test_sparsity_preserves_topology():
    g = generate_grid(5, 8)
    out = apply_sparsity(g, 0.25, 3)
    assert [e[:2] for e in out.edges] == [e[:2] for e in g.edges]
    assert out.is_connected()


# --- reproducibility ----------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        GraphSpec(family="grid", n=6, weight_seed=42, sparsity=0.25),
        GraphSpec(family="wheel", n=21, weight_seed=42, r=20.0),
        GraphSpec(family="scale_free", n=60, weight_seed=42, topology_seed=7, gamma=2.0),
    ],
)
def test_build_graph_reproducible(spec):
    a = build_graph(spec)
    b = build_graph(spec)
    assert a == b
    assert a.is_connected()
    assert all(w >= 0 for _, _, w in a.edges)


def test_weight_and_topology_streams_independent():
    # same topology seed, different weight seed: identical edge sets
    a = generate_scale_free(80, 2.0, topology_seed=3, weight_seed=1)
    b = generate_scale_free(80, 2.0, topology_seed=3, weight_seed=2)
    assert [e[:2] for e in a.edges] == [e[:2] for e in b.edges]
    assert [e[2] for e in a.edges] != [e[2] for e in b.edges]
