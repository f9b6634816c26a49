import json
import subprocess
import sys

import numpy as np
import pytest

from mlrabi.cli import RunConfig, execute, main, parse_config, parse_coupling
from mlrabi.errors import ConfigError
from mlrabi.records import SPECTRUM_COLUMNS, records_from_csv, records_from_json


def test_parse_spectrum_flags():
    cfg = parse_config("spectrum --n 2 --m 2 --coupling diag:1.0,0.7 --epsilon 0 --cutoff 64".split())
    assert cfg.command == "spectrum"
    np.testing.assert_array_equal(cfg.model.coupling, np.diag([1.0, 0.7]))
    assert cfg.model.fock_cutoff == 64 and cfg.model.epsilon == 0.0


def test_parse_rmt_stats():
    cfg = parse_config("rmt-stats --ensemble complex --n 5 --m 5".split())
    assert cfg.options == {"ensemble": "complex", "n": 5, "m": 5}
    assert cfg.model is None


def test_parse_fig4():
    cfg = parse_config("fig4 --systems 600 --epsilon 0.05 --seed 42".split())
    assert cfg.seed == 42 and cfg.options["systems"] == 600 and cfg.options["epsilon"] == 0.05


@pytest.mark.parametrize(
    "text,expected",
    [
        ("diag:1,2", np.diag([1.0, 2.0])),
        ("uniform:0.5", np.full((2, 2), 0.5)),
        ("rank1:1,2;3,4", np.outer([1, 2], [3, 4])),
        ("full:[[1+2i, 0.5], [0, -1i]]", np.array([[1 + 2j, 0.5], [0, -1j]])),
    ],
)
def test_coupling_grammar(text, expected):
    np.testing.assert_array_equal(parse_coupling(text, 2, 2), expected)


def test_ginibre_coupling_is_seeded():
    a = parse_coupling("ginibre:5", 3, 2)
    assert a.shape == (3, 2)
    np.testing.assert_array_equal(a, parse_coupling("ginibre:5", 3, 2))


@pytest.mark.parametrize(
    "argv",
    [
        "spectrum --coupling full:[[1,2] --n 1 --m 2",
        "spectrum --coupling blob:1",
        "spectrum --coupling uniform:1",
        "spectrum --n 2 --m 2 --coupling diag:1",
        "fig4 --systems 3",
        "fig5",
        "appendix-sv",
        "spectrum --coupling diag:1 --bogus 3",
        "nonsense",
        "fig1 --tol -1",
    ],
)
def test_config_errors(argv):
    with pytest.raises(ConfigError):
        parse_config(argv.split())


def test_config_file_and_override(tmp_path):
    doc = {"command": "spectrum", "n": 1, "m": 1, "coupling": "diag:0.3", "cutoff": 20, "format": "json"}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    cfg = parse_config(["spectrum", "--config", str(path), "--cutoff", "12"])
    assert cfg.model.fock_cutoff == 12  # flag wins
    assert cfg.output_format == "json"
    assert cfg.model.coupling[0, 0] == 0.3
    # a config document for another command is refused
    with pytest.raises(ConfigError):
        parse_config(["fig1"], file=json.dumps(doc))
    with pytest.raises(ConfigError):
        parse_config(["fig1"], file="{not json")
    with pytest.raises(ConfigError):
        parse_config(["fig1"], file=json.dumps({"systems": 3}))


def test_config_file_round_trip(tmp_path):
    """Options written back as a config document reproduce the same RunConfig."""
    cfg = parse_config("fig4 --systems 7 --epsilon 0.05 --seed 42 --bins 10,20".split())
    doc = {"command": "fig4", "seed": cfg.seed, **cfg.options}
    again = parse_config(["fig4"], file=json.dumps(doc))
    assert again.describe() == cfg.describe()


def test_spectrum_bare_ladder(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(["spectrum", "--coupling", "diag:0", "--cutoff", "8", "--levels", "5", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(SPECTRUM_COLUMNS)
    recs = records_from_csv(text)
    np.testing.assert_allclose([r.energy for r in recs], [0, 1, 1, 2, 2], atol=1e-12)
    assert "5 records" in capsys.readouterr().err


def test_svd_uniform(tmp_path):
    out = tmp_path / "s.json"
    assert main(["svd", "--n", "4", "--m", "4", "--coupling", "uniform:1", "--format", "json", "--out", str(out)]) == 0
    sv = [r.extra["singular_value"] for r in records_from_json(out.read_text())]
    np.testing.assert_allclose(sv, [4, 0, 0, 0], atol=1e-12)


def test_radiation_command_lists_dark_states(tmp_path):
    out = tmp_path / "r.json"
    assert main(["radiation", "--n", "3", "--m", "1", "--coupling", "uniform:1", "--format", "json",
                 "--out", str(out)]) == 0
    recs = records_from_json(out.read_text())
    assert [r.extra["dark"] for r in recs] == [False, True, True]
    assert recs[0].extra["effective_coupling"] == pytest.approx(np.sqrt(3))


def test_convergence_failure_exit_code_and_no_partial_output(tmp_path):
    out = tmp_path / "s.csv"
    code = main(["spectrum", "--coupling", "diag:3", "--cutoff", "4", "--max-cutoff", "8", "--out", str(out)])
    assert code == 3
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_precision_failure_exit_code(monkeypatch, tmp_path):
    from mlrabi import cli
    from mlrabi.errors import PrecisionError

    def boom(cfg):
        raise PrecisionError("residual too large")

    monkeypatch.setitem(cli._DISPATCH, "svd", boom)
    cfg = parse_config(["svd", "--coupling", "diag:1", "--out", str(tmp_path / "x")])
    assert execute(cfg) == 4


def test_config_error_exit_code():
    assert main(["fig5"]) == 2


def test_identical_runs_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["appendix-sv", "--n-grid", "2,4", "--trials-mean", "30", "--trials-hist", "20",
                     "--seed", "3", "--format", "json", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_thread_count_does_not_change_output(tmp_path):
    outs = []
    for threads in ("1", "3"):
        p = tmp_path / f"f1_{threads}.csv"
        assert main(["fig1", "--points", "4", "--lambda-max", "1", "--levels", "4", "--threads", threads,
                     "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "mlrabi", "rmt-stats", "--n", "20", "--m", "20", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    rec = records_from_csv(out.read_text())[0]
    assert rec.extra["pdf_mass"] == pytest.approx(1.0, abs=1e-12)
    assert "1 records" in proc.stderr


def test_runconfig_describe_is_json_safe():
    cfg = parse_config("spectrum --coupling full:[[1i]] --n 1 --m 1".split())
    json.dumps(cfg.describe())
    assert isinstance(cfg, RunConfig)
