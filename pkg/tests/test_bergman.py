import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarkoszul.bergman import (BergmanBasis, acr_residual, commutator_norm,
                                lp_density_residual, monomial_norm_sq, polar_quadrature,
                                symbol_from_name, toeplitz_matrix)
from dbarkoszul.errors import HypothesisError
from dbarkoszul.holomap import preset_map


@pytest.mark.parametrize("k", [0, 1, 4, 9])
def test_monomial_norms(k):
    q = polar_quadrature((1.0,), 24, 40)
    num = q.integrate(np.abs(q.points[:, 0]) ** (2 * k))
    assert abs(num - monomial_norm_sq((k,), (1.0,))) < 1e-12
    assert abs(monomial_norm_sq((k,), (1.0,)) - np.pi / (k + 1)) < 1e-14


def test_basis_is_orthonormal():
    b = BergmanBasis(8)
    assert b.gram_residual < 1e-10
    b2 = BergmanBasis(3, radii=(1.0, 1.0))
    assert b2.gram_residual < 1e-10


def test_real_symbol_is_hermitian():
    T = toeplitz_matrix("|z|^2", 10).matrix
    assert np.allclose(T, T.conj().T, atol=1e-13)


def test_against_independent_quadrature():
    # <T_phi e_j, e_k> = int phi e_j conj(e_k) with a different rule
    N = 6
    T = toeplitz_matrix("zbar", N).matrix
    q = polar_quadrature((1.0,), 40, 64)
    z = q.points[:, 0]
    e = lambda j: z ** j / np.sqrt(np.pi / (j + 1))
    for j in range(N + 1):
        for k in range(N + 1):
            ref = q.integrate(np.conj(z) * e(j) * np.conj(e(k)))
            assert abs(T[k, j] - ref) < 1e-12


def test_holomorphic_symbols_commute():
    A = toeplitz_matrix("z", 12)
    B = toeplitz_matrix("z^2", 12)
    assert commutator_norm(A, B) < 1e-10
    C = toeplitz_matrix("zbar", 12)
    assert commutator_norm(A, C) > 0.05


def test_unbounded_symbol_rejected():
    with pytest.raises(HypothesisError):
        toeplitz_matrix(lambda p: np.where(np.abs(p[:, 0]) < 0.5, np.inf, 1.0), 4)


def test_rank_hypothesis():
    with pytest.raises(HypothesisError, match="jacobian-rank"):
        acr_residual(preset_map("z1"), "z2bar", 3)


def test_toeplitz_of_one_is_projection():
    rep = acr_residual(preset_map("z"), "zbar", 8)
    assert abs(rep.tg1_minus_g - np.sqrt(np.pi / 2)) < 1e-6


@given(st.integers(0, 6))
def test_in_span_field_has_zero_residual(d):
    f = preset_map("z")
    field = lambda p: p[:, 0] ** 2 * np.conj(p[:, 0])
    curve = lp_density_residual(f, field, d, nr=24, nt=48)
    assert np.all(np.diff(curve.residuals) <= 1e-12)
    if d >= 3:
        assert curve.residuals[-1] < 1e-8 * curve.field_norm


def test_symbol_names():
    assert symbol_from_name("zbar")(np.array([[1j]]))[0] == -1j
    with pytest.raises(ValueError):
        symbol_from_name("nope")
