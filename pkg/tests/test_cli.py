import numpy as np
import pytest

from syndrocal.cli import ScenarioConfig, main, read_config
from syndrocal.errors import ParseError


def _run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_calibrate_noiseless_all_ones(capsys):
    code, out, _ = _run(capsys, "calibrate")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# syndrocal-csv v1 calibrate"
    assert lines[1].startswith("a,gamma,beta,alpha")
    for row in lines[2:66]:
        assert row.split(",")[1:4] == ["1.0", "1.0", "1.0"]
    assert "# syndrocal-csv v1 calibrate/beta_au" in lines


def test_calibrate_sweep_and_determinism(capsys):
    args = ("calibrate", "--noise", "depolarizing2:lambda=0", "--lambdas", "0.01,0.05",
            "--shots", "2000", "--seed", "7")
    _, a, _ = _run(capsys, *args)
    _, b, _ = _run(capsys, *args)
    assert a == b
    assert "empirical" in a
    _, c, _ = _run(capsys, *args[:-1], "8")
    assert a != c


def test_calibrate_exact_path_is_spectral(capsys):
    code, out, _ = _run(capsys, "calibrate", "--noise", "depolarizing2:lambda=0.01")
    assert code == 0 and ",spectral" in out


def test_out_directory_and_config(tmp_path, capsys):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("# decoder scenario\nlambdas = 0, 0.1\nshots = 500\nseed = 3\n")
    code, _, _ = _run(capsys, "decode-compare", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code == 0
    text = (tmp_path / "o" / "decode-compare.csv").read_text()
    assert text.startswith("# syndrocal-csv v1 decode-compare\nlambda,standard_wrong_rate")
    rows = text.splitlines()[2:]
    assert len(rows) == 2 and rows[0].split(",")[1] == "0.0"
    # flags override the file
    _run(capsys, "decode-compare", "--config", str(cfg), "--seed", "4", "--out", str(tmp_path / "p"))
    assert (tmp_path / "p" / "decode-compare.csv").read_text() != text


def test_read_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    with pytest.raises(ParseError):
        read_config(bad)
    bad.write_text("shots\n")
    with pytest.raises(ParseError):
        read_config(bad)


def test_config_invariants():
    with pytest.raises(ValueError):
        ScenarioConfig(lambdas=(1.5,))
    with pytest.raises(ValueError):
        ScenarioConfig(shots=0)


def test_estimate_channel(capsys):
    code, out, _ = _run(capsys, "estimate-channel", "--lambdas", "0,0.05")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# syndrocal-csv v1 estimate-channel"
    zero = lines[2].split(",")
    assert float(zero[1]) == 0 and float(zero[2]) == 0
    lam, raw, cal = lines[3].split(",")
    assert float(cal) <= float(raw)
    assert "# syndrocal-csv v1 estimate-channel/channels" in lines


def test_recover_generators(capsys):
    code, out, _ = _run(capsys, "recover-generators", "--analytic", "--shots", "100")
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()[2:]]
    assert [r[0] for r in rows] == ["S4", "S5", "S6"]
    assert all(float(r[2]) == pytest.approx(1.0) for r in rows)
    code, out, _ = _run(capsys, "recover-generators", "--noise", "none")
    assert all(r.split(",")[1:] == ["1.0", "1.0", "0.0", "1.0", "1.0"] for r in out.splitlines()[2:])


def test_errors_exit_2(capsys):
    code, _, err = _run(capsys, "calibrate", "--noise", "warp:lambda=1")
    assert code == 2 and err.startswith("syndrocal calibrate:")
    code, _, _ = _run(capsys, "calibrate", "--rounds", "3")
    assert code == 2
    code, _, _ = _run(capsys, "recover-generators", "--generators", "9")
    assert code == 2
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_csv_parses_numerically(tmp_path, capsys):
    _run(capsys, "calibrate", "--noise", "z-control:lambda=0.1", "--out", str(tmp_path))
    data = np.genfromtxt(tmp_path / "calibrate.csv", delimiter=",", skip_header=2,
                         usecols=(1, 2, 3))
    assert data.shape == (64, 3)
    assert np.allclose(data[:, 0] * data[:, 2], 1.0)
