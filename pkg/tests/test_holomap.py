import numpy as np
import pytest

from dbarkoszul.grid import build_domain
from dbarkoszul.holomap import constant_map, jacobian_rank_mask, preset_map

DISC = build_domain("disc", 1.0, 1 / 16)


@pytest.mark.parametrize("name", ["z", "z^2", "z,1-z", "z-2"])
def test_presets_are_holomorphic(name):
    f = preset_map(name)
    assert f.holomorphy_defect(DISC) <= f.holomorphy_tolerance(DISC)


def test_jacobian_matches_differences():
    f = preset_map("z^2")
    p = np.array([[0.3 + 0.2j]])
    d = 1e-6
    num = (f(p + d)[0] - f(p - d)[0]) / (2 * d)
    assert np.allclose(f.jacobian(p)[0, 0, 0], num, atol=1e-8)


def test_shift_and_constant():
    f = preset_map("z,1-z").shifted(np.array([0.5, 0.5]))
    p = np.array([[0.5 + 0j]])
    assert np.allclose(f(p)[:, 0], 0.0)
    c = constant_map([1 + 1j], 1)
    assert np.allclose(c.samples(DISC)[0][DISC.inside_mask], 1 + 1j)


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset_map("sin")


def test_rank_mask_finds_critical_point():
    mask = jacobian_rank_mask(preset_map("z^2"), DISC, 0.1)
    centre = (16, 16)
    assert mask[centre]
    assert not jacobian_rank_mask(preset_map("z"), DISC, 0.1).any()
