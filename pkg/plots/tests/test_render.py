import os
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from matchplots import FigureSpec, NoDataError, SchemaError, render

DATA = os.path.join(os.path.dirname(__file__), "data")

GOLDEN = {
    "F3": "welfare.csv",
    "F4": "welfare.csv",
    "F5": "welfare.csv",
    "F6": "strategy.csv",
    "F7": "strategy.csv",
    "F8": "per_rank.csv",
}


def golden(name):
    return os.path.join(DATA, name)


class TestRenderAllFigures:
    @pytest.mark.parametrize("fig", sorted(GOLDEN))
    def test_renders_svg_without_error(self, fig, tmp_path):
        out = str(tmp_path / f"{fig}.svg")
        assert render(FigureSpec(fig, golden(GOLDEN[fig]), out)) == out
        assert os.path.getsize(out) > 0

    @pytest.mark.parametrize("fig", ["F3", "F8"])
    def test_renders_png_too(self, fig, tmp_path):
        out = str(tmp_path / f"{fig}.png")
        render(FigureSpec(fig, golden(GOLDEN[fig]), out))
        with open(out, "rb") as f:
            assert f.read(8) == b"\x89PNG\r\n\x1a\n"


class TestDeterminism:
    @pytest.mark.parametrize("fig", sorted(GOLDEN))
    def test_re_render_is_byte_identical(self, fig, tmp_path):
        a = str(tmp_path / "a.svg")
        b = str(tmp_path / "b.svg")
        render(FigureSpec(fig, golden(GOLDEN[fig]), a))
        render(FigureSpec(fig, golden(GOLDEN[fig]), b))
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()

    def test_rendering_does_not_modify_the_csv(self, tmp_path):
        before = open(golden("welfare.csv"), "rb").read()
        render(FigureSpec("F3", golden("welfare.csv"), str(tmp_path / "f3.svg")))
        assert open(golden("welfare.csv"), "rb").read() == before


class TestPerRankGrid:
    def test_contains_exactly_six_panels(self, tmp_path):
        out = str(tmp_path / "f8.svg")
        render(FigureSpec("F8", golden("per_rank.csv"), out))
        tree = ET.parse(out)
        ns = {"svg": "http://www.w3.org/2000/svg"}
        panels = [
            g for g in tree.getroot().iter("{http://www.w3.org/2000/svg}g")
            if (g.get("id") or "").startswith("axes_")
        ]
        assert len(panels) == 6

    def test_wrong_panel_count_is_a_schema_error(self, tmp_path):
        src = open(golden("per_rank.csv")).read().splitlines()
        truncated = [src[0]] + [line for line in src[1:] if line.startswith("0.0,")]
        path = tmp_path / "short.csv"
        path.write_text("\n".join(truncated) + "\n")
        with pytest.raises(SchemaError, match="exactly 6"):
            render(FigureSpec("F8", str(path), str(tmp_path / "f8.svg")))


class TestErrors:
    def test_schema_mismatch_names_the_columns(self, tmp_path):
        path = tmp_path / "wrong.csv"
        path.write_text("beta,mechanism,oops\n0.0,hybrid,1\n")
        with pytest.raises(SchemaError, match="mean_piS"):
            render(FigureSpec("F3", str(path), str(tmp_path / "f3.svg")))
        assert not (tmp_path / "f3.svg").exists()

    def test_header_only_csv_is_no_data(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("beta,mechanism,mean_piS,se_piS,mean_piC,se_piC,mean_Pi,se_Pi\n")
        with pytest.raises(NoDataError, match="no data"):
            render(FigureSpec("F4", str(path), str(tmp_path / "f4.svg")))
        assert not (tmp_path / "f4.svg").exists()

    def test_totally_empty_file_is_no_data(self, tmp_path):
        path = tmp_path / "blank.csv"
        path.write_text("")
        with pytest.raises(NoDataError, match="no data"):
            render(FigureSpec("F5", str(path), str(tmp_path / "f5.svg")))

    def test_unknown_figure_id(self):
        with pytest.raises(ValueError, match="unknown figure"):
            FigureSpec("F9", "x.csv", "x.svg")


class TestCli:
    def test_render_subcommand(self, tmp_path):
        out = str(tmp_path / "f6.svg")
        proc = subprocess.run(
            [sys.executable, "-m", "matchplots.cli", "render",
             "--fig", "F6", "--in", golden("strategy.csv"), "--out", out],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert os.path.exists(out)
