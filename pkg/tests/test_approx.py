import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarkoszul.approx import (TARGETS, approximate, check_boundary_vanishing,
                               check_vanishing_hypotheses, partition_weights,
                               smooth_vanishing_data, soft_threshold, write_lambda_table)
from dbarkoszul.errors import HypothesisError
from dbarkoszul.forms import KoszulForm, dbar_apply
from dbarkoszul.grid import build_domain
from dbarkoszul.holomap import preset_map

DISC = build_domain("disc", 1.0, 1 / 32)

complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@given(st.lists(complexes, min_size=1, max_size=20), st.floats(1e-3, 2))
def test_soft_threshold_properties(vals, tau):
    g = np.array(vals)
    s = soft_threshold(g, tau)
    assert np.all(s[np.abs(g) <= tau] == 0)
    assert np.all(np.abs(s - g) <= 2 * tau + 1e-12)
    assert np.all(s[np.abs(g) >= 2 * tau] == g[np.abs(g) >= 2 * tau])


@given(st.integers(0, 2 ** 31))
def test_partition_sums_to_one(seed):
    rng = np.random.default_rng(seed)
    cloud = (rng.uniform(-1, 1, 200) + 1j * rng.uniform(-1, 1, 200))[:, None]
    centers = cloud[:15]
    radii = rng.uniform(0.3, 1.0, 15)
    weights, total = partition_weights(centers, radii, cloud)
    acc = np.zeros(len(cloud))
    for idx, w in weights:
        assert np.all(w >= 0)
        np.add.at(acc, idx, w)
    assert np.allclose(acc[total > 0], 1.0)


def test_boundary_vanishing_rejects_one():
    with pytest.raises(HypothesisError, match="boundary-vanishing"):
        check_boundary_vanishing(TARGETS["one"], DISC, 0.1)
    assert check_boundary_vanishing(TARGETS["1-|z|^2"], DISC, 0.3) < 0.225


def test_vanishing_rank_set():
    g = lambda p: np.ones(p.shape[:-1], dtype=complex)
    with pytest.raises(HypothesisError, match="vanishing-rank-set"):
        check_vanishing_hypotheses(preset_map("z^2"), g, DISC, 0.1)


def test_smoothed_data_is_close_and_frozen():
    f = preset_map("z")
    g = TARGETS["1-|z|^2"]
    data = smooth_vanishing_data(f, g, np.array([0.3 + 0.1j]), 0.3, DISC)
    inside = DISC.inside_mask
    assert np.abs(data.values - g(DISC.points))[inside].max() < 0.3
    # dbar of g^lambda vanishes on the frozen zone around the fiber
    W = dbar_apply(KoszulForm.scalar(DISC, 1, data.values))
    zone = data.fiber_zone & W.valid
    assert zone.any()
    assert np.abs(W.coeffs[0, 0])[zone].max() < 1e-12


def test_coarse_pipeline(tmp_path):
    approx = approximate(preset_map("z"), TARGETS["1-|z|^2"], 0.3, DISC)
    assert approx.passed
    assert approx.error <= 0.6
    assert approx.model_term <= 0.3
    path = tmp_path / "net.csv"
    write_lambda_table(approx.net, path)
    assert len(path.read_text().splitlines()) == len(approx.net) + 1


def test_pipeline_is_disc_only():
    d = build_domain("polydisc", (1.0, 1.0), 1 / 8)
    with pytest.raises(ValueError):
        approximate(preset_map("z1"), TARGETS["zero"], 0.1, d)
