"""Plot pipeline checks: file creation, schema errors, render stability."""

from __future__ import annotations

from pathlib import Path

import pytest

from seriation_plots import (
    CurvesFormatError,
    MatrixFileError,
    plot_error_curves,
    plot_matrix_heatmap,
    plot_reorder_pair,
    read_curves_csv,
)
from seriation_plots.cli import main

FIXTURE = Path(__file__).parent / "fixtures" / "curves_fixture.csv"


def test_fixture_reads_cleanly():
    points = read_curves_csv(FIXTURE)
    assert len(points) == 60
    assert {p.scenario for p in points} == {"s1", "s2", "s3", "s4"}


def test_error_curves_four_panel_png(tmp_path):
    out = tmp_path / "curves.png"
    plot_error_curves(FIXTURE, out)
    assert out.exists() and out.stat().st_size > 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_render_is_stable_within_environment(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    plot_error_curves(FIXTURE, a)
    plot_error_curves(FIXTURE, b)
    assert a.read_bytes() == b.read_bytes()


def test_single_point_file(tmp_path):
    src = tmp_path / "one.csv"
    src.write_text(
        "scenario,algo,delta,mean_error,q10,q90,n_reps\ns1,asii,0.2,0.4,0.3,0.6,100\n"
    )
    out = tmp_path / "one.png"
    plot_error_curves(src, out)
    assert out.stat().st_size > 0


def test_empty_curves_rejected_without_output(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text("")
    out = tmp_path / "never.png"
    with pytest.raises(CurvesFormatError):
        plot_error_curves(src, out)
    assert not out.exists()


def test_header_mismatch_rejected(tmp_path):
    src = tmp_path / "bad.csv"
    src.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(CurvesFormatError):
        plot_error_curves(src, tmp_path / "x.png")


def _write_matrix(path, n, shift=0.0):
    rows = []
    for i in range(n):
        rows.append(",".join(str(n - abs(i - j) + shift) for j in range(n)))
    path.write_text("\n".join(rows) + "\n")


def test_matrix_heatmap(tmp_path):
    src = tmp_path / "m.csv"
    _write_matrix(src, 8)
    out = tmp_path / "m.png"
    plot_matrix_heatmap(src, out, title="banded")
    assert out.stat().st_size > 0


def test_reorder_pair_shares_scale(tmp_path):
    before, after = tmp_path / "before.csv", tmp_path / "after.csv"
    _write_matrix(before, 6, shift=0.0)
    _write_matrix(after, 6, shift=2.0)
    out = tmp_path / "pair.png"
    plot_reorder_pair(before, after, out)
    assert out.stat().st_size > 0


def test_reorder_pair_size_mismatch(tmp_path):
    before, after = tmp_path / "b.csv", tmp_path / "a.csv"
    _write_matrix(before, 5)
    _write_matrix(after, 6)
    with pytest.raises(MatrixFileError):
        plot_reorder_pair(before, after, tmp_path / "x.png")


def test_cli_error_curves(tmp_path, capsys):
    out = tmp_path / "cli.png"
    assert main(["--kind", "error-curves", "--in", str(FIXTURE), "--out", str(out)]) == 0
    assert out.stat().st_size > 0
    assert "wrote" in capsys.readouterr().out


def test_cli_reorder_pair_arity(tmp_path):
    src = tmp_path / "m.csv"
    _write_matrix(src, 4)
    with pytest.raises(SystemExit):
        main(["--kind", "reorder-pair", "--in", str(src), "--out", str(tmp_path / "x.png")])
