import numpy as np

from dbarkoszul.grid import build_domain
from dbarkoszul.suites import (algebra_suite, random_field, solver_corpus, solver_suite,
                               suite_map)

SMALL = dict(forms=2, disc_h=1 / 16, bidisc_h=1 / 8, order_hs=(1 / 16, 1 / 32, 1 / 64))


def test_small_algebra_suite_passes(tmp_path):
    report = algebra_suite(seed=3, **SMALL)
    assert report.passed, [r for r in report.failures()]
    for m, (_, _, order) in report.orders.items():
        assert order >= 1.5
    report.write_csv(tmp_path / "a.csv")
    report.write_order_csv(tmp_path / "b.csv")


def test_wrong_contraction_sign_is_caught():
    report = algebra_suite(seed=3, alternating=False, ms=(2,), **SMALL)
    assert not report.passed
    assert {r.identity for r in report.failures()} & {"TT", "leibniz"}


def test_random_field_reproducible():
    d = build_domain("disc", 1.0, 1 / 8)
    a = random_field(np.random.default_rng(5), 1).on_grid(d)
    b = random_field(np.random.default_rng(5), 1).on_grid(d)
    assert np.array_equal(a, b)


def test_suite_maps_are_holomorphic():
    d = build_domain("disc", 1.0, 1 / 16)
    for m in (1, 2, 3):
        f = suite_map(1, m)
        assert f.m == m
        assert f.holomorphy_defect(d) <= f.holomorphy_tolerance(d)


def test_corpus_has_ten_cases():
    cases = solver_corpus()
    assert len(cases) == 10
    assert len({c.name for c in cases}) == 10


def test_disc_solver_suite_coarse():
    cases = [c for c in solver_corpus() if c.kind == "disc"]
    report = solver_suite(cases, spacings={"disc": (1 / 8, 1 / 16, 1 / 32)})
    assert report.passed
