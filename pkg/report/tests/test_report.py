"""Renderer tests against synthetic artifacts matching the file contract."""

import json
import math

import numpy as np
import pytest

from zetareport import cli, figures

HEADER = ",".join(figures.SAMPLE_COLUMNS)


def make_clt_dir(root, n=400, seed=3):
    """Synthetic clt output: one cell, Gaussian samples with variance 0.6."""
    rng = np.random.default_rng(seed)
    theo = 0.6
    x = rng.normal(scale=math.sqrt(theo), size=n)
    lines = [HEADER]
    for i in range(n):
        om = 1.0 + (i + 0.5) / n
        lines.append(
            f"{om:.17g},10000,3,100,nan,{x[i]:.17g},{x[i]:.17g},0,nan,{x[i]:.17g}"
        )
    root.mkdir(parents=True, exist_ok=True)
    (root / "samples_gaussian_0_1__t10000.csv").write_text(
        "\n".join(lines) + "\n"
    )
    summary = {
        "gaussian(0,1)@t=10000": {
            "n": n, "mean": float(np.mean(x)), "variance": float(np.var(x)),
            "skewness": 0.0, "excess_kurtosis": 0.0, "ks_distance": 0.01,
            "theoretical_variance": theo, "moment_5": 0.0, "moment_6": 0.0,
        }
    }
    (root / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return root


def make_cov_dir(root):
    root.mkdir(parents=True, exist_ok=True)
    payload = {
        "functions": ["gaussian(0,1)", "gaussian(1,2)"],
        "t": 10000.0, "lambda": 3.0, "n_samples": 200,
        "empirical": [[0.61, 0.12], [0.12, 0.58]],
        "theoretical": [[0.6366, 0.1], [0.1, 0.6366]],
        "frobenius_relative_distance": 0.08,
    }
    (root / "covariance.json").write_text(json.dumps(payload) + "\n")
    return root


def make_explicit_dir(root):
    root.mkdir(parents=True, exist_ok=True)
    lines = [",".join(figures.EXPLICIT_COLUMNS)]
    for t in (1e3, 1e4, 1e5):
        env = 3.0 / math.log(t)
        lines.append(f"gaussian(0,1),{t:.17g},3,{0.4 * env:.17g},"
                     f"{1.2 * env:.17g},{env:.17g},200")
    (root / "explicit.csv").write_text("\n".join(lines) + "\n")
    return root


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------

def test_load_samples_round_trip(tmp_path):
    d = make_clt_dir(tmp_path / "clt")
    cols = figures.load_samples(d / "samples_gaussian_0_1__t10000.csv")
    assert set(cols) == set(figures.SAMPLE_COLUMNS)
    assert cols["normalized"].shape == (400,)
    assert np.isnan(cols["zero_side"]).all()


def test_load_samples_renamed_column_names_it(tmp_path):
    d = make_clt_dir(tmp_path / "clt")
    p = d / "samples_gaussian_0_1__t10000.csv"
    p.write_text(p.read_text().replace("normalized", "normalised", 1))
    with pytest.raises(figures.SchemaError, match="normalized"):
        figures.load_samples(p)


def test_load_samples_empty_errors(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(HEADER + "\n")
    with pytest.raises(figures.EmptyDataError):
        figures.load_samples(p)


def test_load_explicit_empty_errors(tmp_path):
    p = tmp_path / "explicit.csv"
    p.write_text(",".join(figures.EXPLICIT_COLUMNS) + "\n")
    with pytest.raises(figures.EmptyDataError):
        figures.load_explicit(p)


# ---------------------------------------------------------------------------
# QQ machinery
# ---------------------------------------------------------------------------

def test_qq_selftest_on_diagonal():
    qq = figures.qq_points(figures.gaussian_selftest(500))
    assert np.max(np.abs(qq.ordered - qq.reference)) <= 1e-12


def test_qq_variance_standardizes():
    qq = figures.qq_points(4.0 * figures.gaussian_selftest(200), variance=16.0)
    assert np.max(np.abs(qq.ordered - qq.reference)) <= 1e-12


def test_qq_empty_errors():
    with pytest.raises(figures.EmptyDataError):
        figures.qq_points(np.array([]))


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------

def test_render_clt_two_figures(tmp_path):
    d = make_clt_dir(tmp_path / "clt")
    out = tmp_path / "figs"
    written = figures.render_clt(d, out)
    names = sorted(p.name for p in written)
    assert names == ["hist_gaussian_0_1__t10000.png",
                     "qq_gaussian_0_1__t10000.png"]
    for p in written:
        assert p.stat().st_size > 0


def test_render_clt_deterministic(tmp_path):
    d = make_clt_dir(tmp_path / "clt")
    a = figures.render_clt(d, tmp_path / "a", fmt="svg")
    b = figures.render_clt(d, tmp_path / "b", fmt="svg")
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_render_explicit(tmp_path):
    d = make_explicit_dir(tmp_path / "exp")
    written = figures.render_explicit(d, tmp_path / "figs")
    assert [p.name for p in written] == ["residual_scaling.png"]
    assert written[0].stat().st_size > 0


def test_render_cov(tmp_path):
    d = make_cov_dir(tmp_path / "cov")
    written = figures.render_cov(d, tmp_path / "figs", fmt="svg")
    assert [p.name for p in written] == ["cov_heatmap.svg"]
    body = written[0].read_text()
    assert "0.080" in body  # Frobenius annotation survives into the figure


def test_render_cov_missing_key(tmp_path):
    d = make_cov_dir(tmp_path / "cov")
    payload = json.loads((d / "covariance.json").read_text())
    del payload["theoretical"]
    (d / "covariance.json").write_text(json.dumps(payload))
    with pytest.raises(figures.SchemaError, match="theoretical"):
        figures.render_cov(d, tmp_path / "figs")


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_clt(tmp_path, capsys):
    d = make_clt_dir(tmp_path / "clt")
    out = tmp_path / "figs"
    code = cli.main(["clt", "--in", str(d), "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 2
    assert (out / "hist_gaussian_0_1__t10000.png").exists()


def test_cli_svg_format(tmp_path):
    d = make_cov_dir(tmp_path / "cov")
    assert cli.main(["cov", "--in", str(d), "--out", str(tmp_path / "f"),
                     "--format", "svg"]) == 0
    assert (tmp_path / "f" / "cov_heatmap.svg").exists()


def test_cli_missing_input_exits_2(tmp_path, capsys):
    code = cli.main(["explicit", "--in", str(tmp_path / "nope"),
                     "--out", str(tmp_path / "f")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_bad_verb_exits_1(capsys):
    assert cli.main(["wiggle", "--in", "x", "--out", "y"]) == 1


def test_cli_no_verb_exits_1(capsys):
    assert cli.main([]) == 1
