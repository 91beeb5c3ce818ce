import xml.etree.ElementTree as ET

import pytest

from layersep.figures import (
    emit_figures,
    render_accuracy_chart,
    render_correlation_chart,
    render_gdv_chart,
)
from layersep.pipeline import AnalyzeConfig, run_analysis
from layersep.synth import SynthLemma, SynthSpec, synth_bundle

LEMMAS = [
    SynthLemma("give_up", "phrasal", "train", 30),
    SynthLemma("look_at", "prepositional", "train", 30),
    SynthLemma("take_up", "phrasal", "test", 15),
    SynthLemma("deal_with", "prepositional", "test", 15),
]


def make_report(tmp_path, separations, levels=("token", "sentence"), seed=30):
    paths = {}
    for i, level in enumerate(levels):
        paths[level] = str(
            synth_bundle(SynthSpec(level, 6, separations, LEMMAS), seed + i, tmp_path / level)
        )
    return run_analysis(
        AnalyzeConfig(
            token_bundle=paths.get("token"), sentence_bundle=paths.get("sentence")
        )
    )


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    return make_report(tmp_path_factory.mktemp("fig"), [0.5, 2.0, 3.0, 1.0, 0.5])


def test_charts_are_well_formed_xml(report):
    for renderer in (render_accuracy_chart, render_gdv_chart, render_correlation_chart):
        root = ET.fromstring(renderer(report))
        assert root.tag.endswith("svg")


def test_accuracy_chart_draws_four_lines(report):
    svg = render_accuracy_chart(report)
    assert svg.count("<polyline") == 4
    for label in ("token LR", "token SVM", "sentence LR", "sentence SVM"):
        assert label in svg


def test_gdv_chart_draws_one_line_per_level(report):
    svg = render_gdv_chart(report)
    assert svg.count("<polyline") == 2


def test_correlation_chart_is_scatter_with_annotations(report):
    svg = render_correlation_chart(report)
    assert "<polyline" not in svg  # scatter: no connecting lines
    assert svg.count("r_s = ") == 4
    assert "n = 5" in svg


def test_missing_level_leaves_no_legend_ghost(tmp_path):
    svg = render_accuracy_chart(
        make_report(tmp_path, [0.5, 2.0, 3.0, 1.0, 0.5], levels=("token",))
    )
    assert "sentence" not in svg
    assert svg.count("<polyline") == 2


def test_single_layer_degrades_to_markers(tmp_path):
    report = make_report(tmp_path, [1.5], levels=("token",))
    svg = render_accuracy_chart(report)
    assert "<polyline" not in svg
    assert svg.count("<circle") == 2  # one marker per series
    ET.fromstring(svg)


def test_rendering_is_deterministic(report):
    assert render_accuracy_chart(report) == render_accuracy_chart(report)
    assert render_correlation_chart(report) == render_correlation_chart(report)


def test_emit_writes_three_files(report, tmp_path):
    paths = emit_figures(report, tmp_path / "figs" / "run1_")
    assert [p.name for p in paths] == ["run1_accuracy.svg", "run1_gdv.svg", "run1_correlation.svg"]
    for path in paths:
        assert path.read_text().startswith("<svg")
