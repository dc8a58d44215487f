import filecmp

import pytest

from dbarkoszul.cli import EXIT_CERTIFICATE, EXIT_HYPOTHESIS, EXIT_OK, load_config, main


def test_config_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nh = 1/32\neps = 0.2  # trailing\nf = z,1-z\nseed = 7\n")
    cfg = load_config(path, {"seed": "9"})
    assert cfg.h == 1 / 32
    assert cfg.eps == 0.2
    assert cfg.f == "z,1-z"
    assert cfg.seed == 9


@pytest.mark.parametrize("text", ["bogus = 1\n", "h 0.1\n", "h = abc\n", "h = -1\n",
                                  "domain = ball\n"])
def test_config_errors(tmp_path, text):
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_config(path)


def _run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def test_corona_is_deterministic(tmp_path):
    c1, a = _run(tmp_path, "a", "corona", "--h", "1/16")
    c2, b = _run(tmp_path, "b", "corona", "--h", "1/16")
    assert c1 == c2 == EXIT_OK
    for name in ("corona_summary.csv", "corona_g.csv"):
        assert filecmp.cmp(a / name, b / name, shallow=False)


def test_toeplitz_and_density(tmp_path):
    code, out = _run(tmp_path, "t", "toeplitz", "--degree", "6")
    assert code == EXIT_OK
    assert (out / "toeplitz_commutators.csv").read_text().startswith("N,")
    code, out = _run(tmp_path, "d", "density", "--degree", "4")
    assert code == EXIT_OK
    assert len((out / "density_curve.csv").read_text().splitlines()) == 6


def test_exit_bounded_below(tmp_path, capsys):
    code, _ = _run(tmp_path, "z", "corona", "--h", "1/16", "--set", "f=z")
    assert code == EXIT_HYPOTHESIS
    assert "bounded-below" in capsys.readouterr().err


def test_exit_boundary_vanishing(tmp_path, capsys):
    code, _ = _run(tmp_path, "one", "approximate", "--h", "1/16", "--set", "g=one")
    assert code == EXIT_HYPOTHESIS
    assert "boundary-vanishing" in capsys.readouterr().err


def test_exit_bad_input(tmp_path):
    assert main(["corona", "--set", "nonsense=1"]) == EXIT_HYPOTHESIS
    assert main(["corona", "--set", "f=sin", "--out", str(tmp_path)]) == EXIT_HYPOTHESIS
    assert EXIT_CERTIFICATE == 1
