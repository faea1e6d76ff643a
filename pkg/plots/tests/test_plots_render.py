import csv
import re

import pytest

from submigrate_plots import REQUIRED_COLUMNS, PlotSpec, render


def svg_dot_count(svg_text):
    """Markers drawn by the scatter call, excluding axis tick glyphs."""
    m = re.search(r'<g id="PathCollection_1">(.*?)<g id="', svg_text, re.S)
    if not m:
        return 0
    body = m.group(1)
    # dots come out as <use> refs when markers are deduplicated into <defs>,
    # or as one inline <path> per dot otherwise
    return body.count("<use") or body.count("<path")


def write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=REQUIRED_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return str(path)


def row(model="interview", x="10", trial=0, rel="0.12", gu="55.0", au="50.0"):
    return {"family": "num_localities", "model": model, "x": x,
            "trial": trial, "seed": 1, "greedy_utility": gu,
            "additive_utility": au, "rel_improvement": rel,
            "greedy_ms": "3.0", "additive_ms": "1.0"}


class TestImprovementScatter:
    def test_single_record_single_dot(self, tmp_path):
        src = write_csv(tmp_path / "r.csv", [row()])
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out)))
        assert summary.files == [str(out)]
        assert summary.points[str(out)] == 1
        assert svg_dot_count(out.read_text()) == 1

    def test_null_improvement_rows_dropped_and_counted(self, tmp_path, capsys):
        rows = [row(trial=0), row(trial=1, rel=""), row(trial=2)]
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out)))
        assert summary.dropped_null == 1
        assert summary.points[str(out)] == 2
        assert "dropped 1 record(s)" in capsys.readouterr().err

    def test_three_models_three_facets(self, tmp_path):
        rows = [row(model=m, trial=t)
                for m in ("correction", "interview", "coordination")
                for t in range(4)]
        src = write_csv(tmp_path / "r.csv", rows)
        summary = render(PlotSpec(input_csv=src, out_path=str(tmp_path / "fig.svg")))
        assert len(summary.files) == 3
        assert sorted(summary.files) == summary.files == [
            str(tmp_path / f"fig_{m}.svg")
            for m in ("coordination", "correction", "interview")]
        assert sum(summary.points.values()) == len(rows)

    def test_no_facet_single_file(self, tmp_path):
        rows = [row(model=m) for m in ("correction", "interview")]
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out),
                                  facet_by_model=False))
        assert summary.files == [str(out)]
        assert summary.points[str(out)] == 2

    def test_outliers_clipped_with_annotation(self, tmp_path):
        rows = [row(trial=0, rel="9.0"), row(trial=1)]  # +900% is off scale
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out)))
        assert summary.points[str(out)] == 2
        assert "1 clipped" in out.read_text()


class TestAbsoluteUtility:
    def test_paired_curves(self, tmp_path):
        rows = [row(x=str(x), trial=t) for x in (1, 2, 5) for t in range(2)]
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out),
                                  kind="absolute-utility"))
        assert summary.points[str(out)] == 6  # 3 x-values, two curves

    def test_null_improvement_rows_kept(self, tmp_path):
        rows = [row(rel=""), row(trial=1)]
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out),
                                  kind="absolute-utility"))
        assert summary.dropped_null == 0


class TestErrors:
    def test_missing_column_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("family,model,x\nnum_localities,interview,1\n")
        with pytest.raises(ValueError, match="missing required columns"):
            render(PlotSpec(input_csv=str(path), out_path=str(tmp_path / "f.svg")))

    def test_empty_input_rejected(self, tmp_path):
        src = write_csv(tmp_path / "r.csv", [])
        with pytest.raises(ValueError, match="no records"):
            render(PlotSpec(input_csv=src, out_path=str(tmp_path / "f.svg")))

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="kind"):
            PlotSpec(input_csv="r.csv", out_path="f.svg", kind="pie")


class TestDeterminism:
    def test_identical_input_identical_bytes(self, tmp_path):
        rows = [row(x=str(x), trial=t, rel=f"0.{t}{x}")
                for x in (1, 5) for t in range(3)]
        src = write_csv(tmp_path / "r.csv", rows)
        outs = []
        for name in ("a.svg", "b.svg"):
            out = tmp_path / name
            render(PlotSpec(input_csv=src, out_path=str(out)))
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_input_file_not_mutated(self, tmp_path):
        src = write_csv(tmp_path / "r.csv", [row()])
        before = open(src, "rb").read()
        render(PlotSpec(input_csv=src, out_path=str(tmp_path / "f.svg")))
        assert open(src, "rb").read() == before

    def test_categorical_x_values(self, tmp_path):
        rows = [row(x=x) for x in ("25/25", "25/50", "50/50")]
        src = write_csv(tmp_path / "r.csv", rows)
        out = tmp_path / "fig.svg"
        summary = render(PlotSpec(input_csv=src, out_path=str(out)))
        assert summary.points[str(out)] == 3
