import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from privroute.generators import generate_grid
from privroute.graph import WeightedGraph
from privroute.release import NoisyRelease, PrivacyParams, release, sigma_from
from privroute.seeds import generator, substream


def chain_graph(weights):
    return WeightedGraph(
        len(weights) + 1, tuple((i, i + 1, w) for i, w in enumerate(weights))
    )


# --- sigma calibration --------------------------------------------------------


def test_sigma_figure_parameters():
    # direct formula evaluation: sqrt(2 ln(1.25/0.01))
    assert sigma_from(1.0, 0.01, 1.0) == pytest.approx(3.1075114600922396, abs=1e-12)


def test_sigma_linear_in_sensitivity():
    assert sigma_from(1.0, 0.01, 2.0) == pytest.approx(2 * sigma_from(1.0, 0.01, 1.0))


def test_sigma_inverse_in_epsilon():
    assert sigma_from(2.0, 0.01, 1.0) == pytest.approx(sigma_from(1.0, 0.01, 1.0) / 2)


@given(
    st.floats(min_value=0.01, max_value=100),
    st.floats(min_value=1e-6, max_value=0.5),
    st.floats(min_value=0.01, max_value=100),
)
def test_sigma_formula(eps, delta, df):
    assert sigma_from(eps, delta, df) == pytest.approx(
        math.sqrt(2 * math.log(1.25 / delta)) * df / eps
    )


def test_sigma_domain_errors():
    with pytest.raises(ValueError):
        sigma_from(0.0, 0.01, 1.0)
    with pytest.raises(ValueError):
        sigma_from(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        sigma_from(1.0, 0.01, 0.0)


def test_privacy_params_routes():
    p = PrivacyParams.from_epsilon_delta(1.0, 0.01, 1.0)
    assert p.sigma == sigma_from(1.0, 0.01, 1.0)
    g = chain_graph([1.0, 3.0])  # mean weight 2.0
    q = PrivacyParams.from_noise_pct(50.0, g)
    assert q.sigma == pytest.approx(1.0)
    assert PrivacyParams.from_sigma(0.3).sigma == 0.3


# --- the release mechanism ----------------------------------------------------


def test_sigma_zero_is_identity():
    g = generate_grid(4, 3)
    rel = release(g, 0.0, trial_seed=99)
    assert rel.graph == g


def test_release_preserves_topology_and_nonnegative():
    g = generate_grid(5, 3)
    rel = release(g, 10.0, trial_seed=1)
    assert rel.graph.node_count == g.node_count
    assert [e[:2] for e in rel.graph.edges] == [e[:2] for e in g.edges]
    assert all(w >= 0.0 for _, _, w in rel.graph.edges)
    assert isinstance(rel, NoisyRelease) and rel.sigma == 10.0


def test_release_reproducible():
    g = generate_grid(5, 3)
    a = release(g, 0.7, trial_seed=123)
    b = release(g, 0.7, trial_seed=123)
    assert a.graph == b.graph
    c = release(g, 0.7, trial_seed=124)
    assert c.graph != a.graph


def test_release_is_clamped_gaussian_of_documented_stream():
    # same stream, same draw order (canonical edges), ziggurat normals
    g = chain_graph([0.5, 0.0, 2.0])
    seed = substream(42, 1, 0)
    rel = release(g, 1.5, seed)
    z = generator(substream(42, 1, 0)).normal(0.0, 1.5, size=3)
    expect = np.maximum(0.0, np.array([0.5, 0.0, 2.0]) + z)
    assert [w for _, _, w in rel.graph.edges] == list(expect)


def test_clamp_binds_for_large_noise():
    g = chain_graph([0.5] * 30)
    rel = release(g, 5.0, trial_seed=8)
    ws = [w for _, _, w in rel.graph.edges]
    assert min(ws) == 0.0  # some draw fell below -0.5
    assert all(w >= 0.0 for w in ws)


def test_zero_weight_edge_mean_matches_half_normal():
    # E[max(0, Z)] = sigma / sqrt(2*pi); 1e5 samples via 100 releases x 1000 edges
    g = chain_graph([0.0] * 1000)
    vals = []
    for t in range(100):
        rel = release(g, 1.0, trial_seed=substream(7, t))
        vals.extend(w for _, _, w in rel.graph.edges)
    assert np.mean(vals) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=0.01)


def test_clamp_bias_positive_and_decreasing():
    # E[released] - w shrinks from the half-normal mean toward zero as w grows
    sigma = 1.0
    levels = [0.0, 0.5, 2.0, 5.0]
    block = 2000
    weights = [w for w in levels for _ in range(block)]
    g = chain_graph(weights)
    sums = np.zeros(len(levels))
    trials = 500  # 1e6 samples per level
    for t in range(trials):
        rel = release(g, sigma, trial_seed=substream(11, t))
        ws = np.array([w for _, _, w in rel.graph.edges])
        for i in range(len(levels)):
            sums[i] += ws[i * block : (i + 1) * block].sum()
    bias = sums / (trials * block) - np.array(levels)
    assert bias[0] > bias[1] > bias[2] > bias[3]
    assert bias[0] > 0 and bias[1] > 0 and bias[2] > 0


def test_clamp_bias_negligible_at_five_sigma():
    # variance-reduced estimate: mean of max(0, w+Z) - (w+Z), i.e. only the
    # clamp correction, which is almost surely zero at w = 5*sigma
    sigma, w = 1.0, 5.0
    z = generator(substream(13)).normal(0.0, sigma, size=100_000)
    correction = np.maximum(0.0, w + z) - (w + z)
    assert correction.mean() <= 1e-4 * sigma


def test_release_rejects_negative_sigma():
    with pytest.raises(ValueError):
        release(chain_graph([1.0]), -0.1, trial_seed=0)
