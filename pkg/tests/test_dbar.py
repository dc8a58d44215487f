import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarkoszul.dbar import cell_kernel, solve_dbar_1d, solve_dbar_form
from dbarkoszul.errors import HypothesisError
from dbarkoszul.forms import KoszulForm, dbar_apply
from dbarkoszul.grid import build_domain
from dbarkoszul.suites import disc_indicator_check, solver_corpus

DISC = build_domain("disc", 1.0, 1 / 32)


def test_cell_kernel_is_additive():
    # the exact cell integral is additive under splitting a rectangle
    whole = cell_kernel(0.1, 0.5, -0.3, 0.2)
    split = cell_kernel(0.1, 0.3, -0.3, 0.2) + cell_kernel(0.3, 0.5, -0.3, 0.2)
    assert abs(whole - split) < 1e-13


def test_indicator_matches_closed_form():
    err, _ = disc_indicator_check(h=1 / 32)
    assert err < 2e-2


@given(st.floats(-1, 1), st.floats(-1, 1), st.integers(0, 3), st.integers(0, 3))
def test_monomial_data(a, b, j, k):
    # w = z^j zbar^k: residual within 10 h ||w||
    z = DISC.z(0)
    w = (a + 1j * b) * z ** j * np.conj(z) ** k
    sol = solve_dbar_1d(w, DISC)
    assert sol.residual_sup <= 10 * DISC.h * max(sol.input_sup, 1e-300) + 1e-14


def test_solution_is_linear():
    z = DISC.z(0)
    a = solve_dbar_1d(z, DISC).solution
    b = solve_dbar_1d(np.conj(z) ** 2, DISC).solution
    c = solve_dbar_1d(2 * z - 3j * np.conj(z) ** 2, DISC).solution
    assert (c - (a.scale(2) + b.scale(-3j))).sup_norm() < 1e-12


def test_non_closed_input_rejected():
    d = build_domain("polydisc", (1.0, 1.0), 1 / 16)
    z1 = d.z(0)
    # zbar1^8 dzbar2 is not closed, and its dbar dominates 20 h ||w||
    w = KoszulForm.from_components(d, 1, 0, 1, {((), (1,)): np.conj(z1) ** 8})
    with pytest.raises(HypothesisError):
        solve_dbar_form(w)


@pytest.mark.parametrize("case", [c for c in solver_corpus() if c.kind == "polydisc"],
                         ids=lambda c: c.name)
def test_bidisc_corpus_coarse(case):
    d = build_domain("polydisc", (1.0, 1.0), 1 / 12)
    sol = solve_dbar_form(case.form(d))
    assert sol.residual_sup <= 10 * d.h * sol.input_sup
    assert sol.solution.degree == (case.r, case.s - 1)


def test_residual_is_recomputable():
    sol = solve_dbar_1d(np.conj(DISC.z(0)), DISC)
    assert abs(sol.recompute_residual() - sol.residual_sup) < 1e-15
    assert sol.bound_constant > 0
