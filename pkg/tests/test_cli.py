import json
import subprocess
import sys

import numpy as np
import pytest

from layersep.bundle import LabelRecord, make_default_manifest, write_bundle
from layersep.cli import main

SPEC = {
    "level": "token",
    "dim": 6,
    "separations": [0.5, 2.5, 1.0, 0.5],
    "lemmas": [
        {"lemma": "give_up", "class": "phrasal", "split": "train", "count": 25},
        {"lemma": "look_at", "class": "prepositional", "split": "train", "count": 25},
        {"lemma": "take_up", "class": "phrasal", "split": "test", "count": 12},
        {"lemma": "deal_with", "class": "prepositional", "split": "test", "count": 12},
    ],
}


@pytest.fixture()
def spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(SPEC))
    return path


@pytest.fixture()
def bundle_dir(tmp_path, spec_file):
    out = tmp_path / "bundle"
    assert main(["synth", "--spec", str(spec_file), "--seed", "4", "--out", str(out)]) == 0
    return out


def test_synth_then_validate(bundle_dir, capsys):
    assert main(["validate", "--bundle", str(bundle_dir)]) == 0
    out = capsys.readouterr().out
    assert "ok:" in out and "layers=4" in out and "count=74" in out


def test_analyze_writes_reports_and_figures(bundle_dir, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(
        ["analyze", "--token-bundle", str(bundle_dir), "--out", str(out_dir), "--figures"]
    )
    assert code == 0
    for name in ("report.json", "report.csv", "accuracy.svg", "gdv.svg", "correlation.svg"):
        assert (out_dir / name).exists(), name
    stdout = capsys.readouterr().out
    assert "lr_vs_gdv" in stdout


def test_analyze_format_selection(bundle_dir, tmp_path):
    out_dir = tmp_path / "json_only"
    assert main(
        ["analyze", "--token-bundle", str(bundle_dir), "--out", str(out_dir), "--format", "json"]
    ) == 0
    assert (out_dir / "report.json").exists()
    assert not (out_dir / "report.csv").exists()


def test_analyze_rejects_unknown_format(bundle_dir, tmp_path):
    code = main(
        ["analyze", "--token-bundle", str(bundle_dir), "--out", str(tmp_path / "x"),
         "--format", "yaml"]
    )
    assert code == 2


def test_gdv_subcommand_agrees_with_report(bundle_dir, tmp_path, capsys):
    assert main(["gdv", "--bundle", str(bundle_dir), "--layer", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["layer"] == 1
    assert set(payload["per_class_intra"]) == {"phrasal", "prepositional"}

    out_dir = tmp_path / "out"
    main(["analyze", "--token-bundle", str(bundle_dir), "--out", str(out_dir)])
    capsys.readouterr()
    report = json.loads((out_dir / "report.json").read_text())
    assert report["levels"]["token"]["layers"][1]["gdv"] == payload["gdv"]


def test_gdv_out_of_range_layer_is_validation_failure(bundle_dir, capsys):
    assert main(["gdv", "--bundle", str(bundle_dir), "--layer", "99"]) == 2
    assert "out of range" in capsys.readouterr().err


def test_validate_rejects_corrupted_bundle(bundle_dir, capsys):
    layer = bundle_dir / "layer_00.f32"
    layer.write_bytes(layer.read_bytes()[:-8])
    assert main(["validate", "--bundle", str(bundle_dir)]) == 2
    assert "layer_00.f32" in capsys.readouterr().err


def test_degenerate_bundle_exits_three(tmp_path, capsys):
    labels = (
        [LabelRecord("phrasal", "give_up", "train")] * 8
        + [LabelRecord("phrasal", "take_up", "test")] * 4
        + [LabelRecord("prepositional", "deal_with", "test")] * 4
    )
    manifest = make_default_manifest("token", 1, 3, 16, "unit-test")
    layers = [np.random.default_rng(0).standard_normal((16, 3)).astype(np.float32)]
    write_bundle(manifest, layers, labels, tmp_path / "onesided")
    code = main(
        ["analyze", "--token-bundle", str(tmp_path / "onesided"), "--out", str(tmp_path / "o")]
    )
    assert code == 3
    assert "degenerate" in capsys.readouterr().err


def test_unwritable_output_exits_four(bundle_dir, tmp_path, capsys):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    code = main(["analyze", "--token-bundle", str(bundle_dir), "--out", str(blocker)])
    assert code == 4
    assert "I/O" in capsys.readouterr().err


def test_missing_bundle_path_exits_two(tmp_path, capsys):
    assert main(["validate", "--bundle", str(tmp_path / "nowhere")]) == 2
    assert "manifest.json" in capsys.readouterr().err


def test_console_script_is_wired_up(bundle_dir):
    result = subprocess.run(
        [sys.executable, "-m", "layersep.cli", "validate", "--bundle", str(bundle_dir)],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert result.stdout.startswith("ok:")


def test_workers_flag_does_not_change_reports(bundle_dir, tmp_path):
    outs = []
    for workers in ("1", "4"):
        out_dir = tmp_path / f"w{workers}"
        assert main(
            ["analyze", "--token-bundle", str(bundle_dir), "--out", str(out_dir),
             "--workers", workers]
        ) == 0
        outs.append((out_dir / "report.json").read_bytes())
    assert outs[0] == outs[1]
