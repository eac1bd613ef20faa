import csv
import hashlib
import json

import pytest
import yaml

from permdetect.cli import main
from permdetect.config import (
    GROUPS,
    config_digest,
    dump_config,
    load_config,
    parse_config,
    preset_names,
)
from permdetect.exceptions import ConfigError
from permdetect.simgen import MixtureSpec
from permdetect.statistics import TABLE_BASIC

FIGURE_PRESETS = {"fig1a", "fig1b", "fig3", "fig4", "fig5a", "fig5b", "fig6a", "fig6b",
                  "fig7a", "fig7b", "fig8a", "fig8b", "fig9a", "fig9b", "fig11"}


class TestConfig:
    def test_presets_present_and_valid(self):
        names = set(preset_names())
        assert FIGURE_PRESETS <= names
        for nm in names:
            cfg = load_config(nm)
            assert cfg.name == nm and cfg.statistics

    def test_fig1b_is_basic_grid(self):
        cfg = load_config("fig1b")
        assert (cfg.n, cfg.p, cfg.effects) == (40, 23, (0.0, 0.25, 0.5))
        assert cfg.statistics == TABLE_BASIC and cfg.balanced

    def test_fig11_is_mixture(self):
        assert isinstance(load_config("fig11").signal, MixtureSpec)

    def test_round_trip(self):
        for nm in preset_names():
            cfg = load_config(nm)
            again = parse_config(dump_config(cfg), name=nm)
            assert dump_config(again) == dump_config(cfg)
            assert config_digest(again) == config_digest(cfg)

    def test_overrides(self):
        cfg = load_config("fig1b", replications=7, permutations=9, alpha=None)
        assert (cfg.replications, cfg.permutations, cfg.alpha) == (7, 9, 0.05)

    def test_groups_expand_and_dedupe(self):
        cfg = parse_config('p: 3\nstatistics: ["@location", "goeman", "SVM.Boot.3"]\n')
        assert cfg.statistics == GROUPS["@location"] + ("SVM.Boot.3",)

    @pytest.mark.parametrize("text, line", [
        ("p: 3\nn: 41\n", 2),
        ("p: 3\nbogus: 1\n", 2),
        ("p: 3\n\ncovariance: {kind: ar1, rho: 1.5}\n", 3),
        ("p: 3\nstatistics: [goeman, nope]\n", 2),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(ConfigError, match=f"line {line}"):
            parse_config(text)

    def test_unknown_preset_lists_valid(self):
        with pytest.raises(ConfigError, match="fig1b"):
            load_config("fig99")


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    assert all(nm in out for nm in FIGURE_PRESETS)


def test_run_unknown_preset(capsys):
    assert main(["run", "nonexistent"]) == 1
    err = capsys.readouterr().err
    assert "fig1b" in err and "fig11" in err


def test_run_bad_config_file(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("p: 3\nn: 7\n")
    assert main(["run", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "line 2" in capsys.readouterr().err


def test_run_fig1b(tmp_path):
    out = tmp_path / "run"
    assert main(["run", "fig1b", "--seed", "7", "--reps", "2", "--perms", "5", "--out", str(out)]) == 0
    with open(out / "power.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    cells = {(r["statistic"], float(r["effect"])) for r in rows}
    assert cells == {(s, e) for s in TABLE_BASIC for e in (0.0, 0.25, 0.5)}
    assert all(r["seed"] == "7" and r["replications"] == "2" for r in rows)

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 7 and manifest["source"] == "fig1b"
    for f in manifest["files"]:
        assert hashlib.sha256((out / f["path"]).read_bytes()).hexdigest() == f["sha256"]
    assert {f["path"] for f in manifest["files"]} == {"power.csv", "config.yaml"}
    mtimes = {p.name: p.stat().st_mtime_ns for p in out.iterdir()}
    assert mtimes["manifest.json"] >= max(mtimes.values())

    cfg = parse_config((out / "config.yaml").read_text())
    assert cfg.replications == 2 and cfg.permutations == 5
    assert config_digest(cfg) == manifest["config_sha256"]

    # rerun reproduces power.csv exactly
    again = tmp_path / "again"
    main(["run", "fig1b", "--seed", "7", "--reps", "2", "--perms", "5", "--out", str(again)])
    assert (again / "power.csv").read_bytes() == (out / "power.csv").read_bytes()


def test_run_flags(tmp_path):
    out = tmp_path / "flags"
    assert main(["run", "fig3", "--reps", "1", "--perms", "3", "--alpha", "0.1",
                 "--pvalue-mode", "add-one", "--tie-break", "off", "--out", str(out)]) == 0
    cfg = yaml.safe_load((out / "config.yaml").read_text())
    assert cfg["alpha"] == 0.1 and cfg["pvalue_mode"] == "add_one" and cfg["tie_break"] is False


def test_run_failure_exit_two(tmp_path, capsys):
    cfg = tmp_path / "fail.yaml"
    cfg.write_text("n: 6\np: 2\nV: 7\nstatistics: [lda.CV.1]\nreplications: 1\npermutations: 2\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "replication 0" in capsys.readouterr().err


def test_plot_is_deterministic(tmp_path):
    src = tmp_path / "power.csv"
    src.write_text("scenario,statistic,effect,replications,rejections,power,mc_se,seed\n"
                   "s,goeman,0.25,10,5,0.5,0.158,0\n"
                   "s,svm.CV.1,0.25,10,2,0.2,0.126,0\n")
    assert main(["plot", str(src), "--out", str(tmp_path / "a")]) == 0
    assert main(["plot", str(src), "--out", str(tmp_path / "b")]) == 0
    a = list((tmp_path / "a").iterdir())
    assert [p.name for p in a] == ["power_s.png"]
    assert a[0].read_bytes() == (tmp_path / "b" / "power_s.png").read_bytes()


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 8
