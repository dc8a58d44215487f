import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarkoszul.forms import (KoszulForm, dbar_apply, erode, index_list, koszul_contract,
                              read_form_csv, wedge, write_form_csv)
from dbarkoszul.grid import build_domain
from dbarkoszul.holomap import preset_map
from dbarkoszul.suites import random_form, suite_map

DISC = build_domain("disc", 1.0, 1 / 16)
BIDISC = build_domain("polydisc", (1.0, 1.0), 1 / 8)


def test_index_list():
    assert index_list(3, 2) == ((0, 1), (0, 2), (1, 2))
    assert index_list(2, 3) == ()
    assert index_list(2, -1) == ()


def test_coefficients_zero_outside_valid():
    W = KoszulForm.scalar(DISC, 1, 1.0)
    assert np.all(W.coeffs[0, 0][~DISC.inside_mask] == 0)
    with pytest.raises(ValueError):
        W.coeffs[0, 0, 3, 3] = 2.0


def test_dbar_of_zbar_is_one():
    W = KoszulForm.scalar(DISC, 1, np.conj(DISC.z(0)))
    D = dbar_apply(W)
    vals = D.coeffs[0, 0][D.valid]
    assert np.allclose(vals, 1.0, atol=1e-13)


def test_dbar_of_holomorphic_polynomial_vanishes():
    z = DISC.z(0)
    D = dbar_apply(KoszulForm.scalar(DISC, 1, 1 + z + z ** 2))
    assert D.sup_norm() < 1e-12


def test_contraction_of_basis_vector():
    f = preset_map("z,1-z")
    W = KoszulForm.from_components(DISC, 2, 1, 0, {((1,), ()): np.ones(DISC.shape)})
    T = koszul_contract(f, W)
    assert np.allclose(T.coeffs[0, 0][DISC.inside_mask], 1 - DISC.z(0)[DISC.inside_mask])


def test_contraction_sign_on_pair():
    # T(e_1 ^ e_2) = f_1 e_2 - f_2 e_1
    f = preset_map("z,1-z")
    W = KoszulForm.from_components(DISC, 2, 2, 0, {((0, 1), ()): np.ones(DISC.shape)})
    T = koszul_contract(f, W)
    z = DISC.z(0)
    m = DISC.inside_mask
    assert np.allclose(T.coeff((1,), ())[m], z[m])
    assert np.allclose(T.coeff((0,), ())[m], -(1 - z)[m])


@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.data())
def test_leibniz_and_square(seed, m, data):
    rng = np.random.default_rng(seed)
    f = suite_map(1, m)
    ra = data.draw(st.integers(0, m))
    rb = data.draw(st.integers(0, m - ra))
    sa = data.draw(st.integers(0, 1))
    sb = data.draw(st.integers(0, 1 - sa))
    A, _ = random_form(DISC, m, ra, sa, rng)
    B, _ = random_form(DISC, m, rb, sb, rng)
    lhs = koszul_contract(f, wedge(A, B))
    second = wedge(A, koszul_contract(f, B))
    rhs = wedge(koszul_contract(f, A), B) + (second if ra % 2 == 0 else -second)
    scale = max(f.sup(DISC), 1) * max(A.sup_norm(), 1e-300) * max(B.sup_norm(), 1e-300)
    assert (lhs - rhs).sup_norm() <= 1e-12 * scale
    TT = koszul_contract(f, koszul_contract(f, A))
    assert TT.sup_norm() <= 1e-12 * max(f.sup(DISC), 1) ** 2 * max(A.sup_norm(), 1e-300)


@given(st.integers(0, 2 ** 31), st.data())
def test_wedge_graded_commutativity(seed, data):
    rng = np.random.default_rng(seed)
    m = 3
    ra = data.draw(st.integers(0, m))
    rb = data.draw(st.integers(0, m - ra))
    sa = data.draw(st.integers(0, 2))
    sb = data.draw(st.integers(0, 2 - sa))
    A, _ = random_form(BIDISC, m, ra, sa, rng)
    B, _ = random_form(BIDISC, m, rb, sb, rng)
    sign = (-1) ** (ra * rb + sa * sb)
    assert (wedge(A, B) - wedge(B, A).scale(sign)).sup_norm() < 1e-13


@given(st.integers(0, 2 ** 31), st.integers(0, 2))
def test_dbar_dbar_vanishes_on_bidisc(seed, r):
    rng = np.random.default_rng(seed)
    W, _ = random_form(BIDISC, 2, r, 0, rng)
    assert dbar_apply(dbar_apply(W)).sup_norm() < 1e-12


def test_dbar_valid_mask_shrinks():
    W = KoszulForm.scalar(DISC, 1, 1.0)
    assert np.array_equal(dbar_apply(W).valid, erode(DISC.inside_mask))


def test_degree_mismatch_rejected():
    A = KoszulForm.zero(DISC, 2, 1, 0)
    B = KoszulForm.zero(DISC, 2, 0, 0)
    with pytest.raises(ValueError):
        A + B


def test_csv_round_trip(tmp_path, rng):
    W, _ = random_form(DISC, 2, 1, 1, rng)
    path = tmp_path / "w.csv"
    write_form_csv(W, path)
    back = read_form_csv(path, DISC, 2, 1, 1)
    assert (back - W).sup_norm() == 0.0
