"""Render figures from the sampling pipeline's CSV/JSON artifacts.

The input contract is the file layout written by the ``zetalab`` CLI:

* ``clt`` runs: ``samples_<slug>_t<t>.csv`` per cell plus ``summary.json``;
* ``cov`` runs: ``covariance.json``;
* ``explicit-check`` runs: ``explicit.csv``.

Rendering is deterministic: fixed figure sizes, the Agg backend, and no
timestamps embedded in the output files.
"""

from __future__ import annotations

import io
import json
import math
import pathlib
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
# deterministic element ids in SVG output
matplotlib.rcParams["svg.hashsalt"] = "zetareport"

import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import norm

SAMPLE_COLUMNS = (
    "omega", "t", "lambda", "u", "zero_side", "prime_full", "prime_primes",
    "prime_powers", "residual", "normalized",
)
EXPLICIT_COLUMNS = (
    "function", "t", "lambda", "mean_abs_residual", "max_abs_residual",
    "envelope", "n",
)

QQ_BAND = 0.05
_FIGSIZE = (6.4, 4.8)


class SchemaError(ValueError):
    """An input file does not match the expected column layout."""


class EmptyDataError(ValueError):
    """An input file parses but carries no data rows."""


@dataclass(frozen=True)
class QQData:
    """Ordered standardized sample quantiles and their Gaussian references."""
    ordered: np.ndarray
    reference: np.ndarray


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def _check_columns(found, expected, path):
    missing = [c for c in expected if c not in found]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {missing}")


def load_samples(path):
    """Parse one samples CSV into a dict of float arrays keyed by column."""
    path = pathlib.Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        _check_columns(header, SAMPLE_COLUMNS, path)
        rest = fh.read()
    if not rest.strip():
        raise EmptyDataError(f"{path}: no data rows")
    body = np.genfromtxt(io.StringIO(rest), delimiter=",", ndmin=2)
    return {name: body[:, i] for i, name in enumerate(header)}


def load_explicit(path):
    """Parse explicit.csv into a list of row dicts."""
    path = pathlib.Path(path)
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        _check_columns(header, EXPLICIT_COLUMNS, path)
        for line in fh:
            # function names may contain commas; only the last six fields
            # are numeric, so split from the right
            parts = line.strip().rsplit(",", len(header) - 1)
            row = dict(zip(header, parts))
            for k in ("t", "lambda", "mean_abs_residual", "max_abs_residual",
                      "envelope"):
                row[k] = float(row[k])
            rows.append(row)
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    return rows


def _slug(name):
    return "".join(c if c.isalnum() else "_" for c in name)


def _summary_cells(in_dir):
    """Yield (csv_path, cell_name, stats_dict) for each summary entry."""
    in_dir = pathlib.Path(in_dir)
    with open(in_dir / "summary.json", "r", encoding="utf-8") as fh:
        summary = json.load(fh)
    if not summary:
        raise EmptyDataError(f"{in_dir / 'summary.json'}: no cells")
    for key, stats in sorted(summary.items()):
        name, _, tstr = key.rpartition("@t=")
        yield in_dir / f"samples_{_slug(name)}_t{tstr}.csv", key, stats


# ---------------------------------------------------------------------------
# QQ machinery
# ---------------------------------------------------------------------------

def qq_points(samples, variance: float = 1.0) -> QQData:
    """Standardized order statistics vs Gaussian plotting-position quantiles."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise EmptyDataError("qq_points: empty sample")
    n = samples.size
    ordered = np.sort(samples) / math.sqrt(variance)
    reference = norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return QQData(ordered=ordered, reference=reference)


def gaussian_selftest(n: int = 500) -> np.ndarray:
    """Synthetic sample that is exactly Gaussian in the quantile sense.

    Feeding this through qq_points must land on the diagonal up to floating
    point, so it pins the plotting-position convention.
    """
    p = (np.arange(1, n + 1) - 0.5) / n
    return norm.ppf(p)


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------

def _save(fig, out_dir, stem, fmt):
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}.{fmt}"
    metadata = {"Date": None} if fmt == "svg" else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)
    return path


def render_clt(in_dir, out_dir, fmt: str = "png"):
    """Histogram with Gaussian overlay and QQ plot per (function, t) cell."""
    written = []
    for csv_path, cell, stats in _summary_cells(in_dir):
        cols = load_samples(csv_path)
        x = cols["normalized"]
        theo = float(stats["theoretical_variance"])
        sd = math.sqrt(theo)
        stem = csv_path.stem[len("samples_"):]

        fig, ax = plt.subplots(figsize=_FIGSIZE)
        ax.hist(x, bins=40, density=True, alpha=0.6, color="#4878d0",
                label=f"samples (n={len(x)})")
        grid = np.linspace(min(x.min(), -4 * sd), max(x.max(), 4 * sd), 400)
        ax.plot(grid, norm.pdf(grid, scale=sd), "k-", lw=1.5,
                label=f"N(0, {theo:.4g})")
        ax.set_title(f"{cell}: empirical density")
        ax.set_xlabel("statistic")
        ax.set_ylabel("density")
        ax.legend()
        written.append(_save(fig, out_dir, f"hist_{stem}", fmt))

        qq = qq_points(x, theo)
        fig, ax = plt.subplots(figsize=_FIGSIZE)
        ax.plot(qq.reference, qq.ordered, ".", ms=3, color="#4878d0")
        lo, hi = qq.reference[0], qq.reference[-1]
        diag = np.array([lo, hi])
        ax.plot(diag, diag, "k-", lw=1)
        ax.plot(diag, diag + QQ_BAND, "k--", lw=0.8)
        ax.plot(diag, diag - QQ_BAND, "k--", lw=0.8,
                label=f"±{QQ_BAND:g} band")
        ax.set_title(f"{cell}: QQ vs N(0, {theo:.4g})")
        ax.set_xlabel("Gaussian quantile")
        ax.set_ylabel("sample quantile (standardized)")
        ax.legend()
        written.append(_save(fig, out_dir, f"qq_{stem}", fmt))
    return written


def render_explicit(in_dir, out_dir, fmt: str = "png"):
    """Log-log residual size vs height, with a lambda/log t guide line."""
    rows = load_explicit(pathlib.Path(in_dir) / "explicit.csv")
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    functions = sorted({r["function"] for r in rows})
    for name in functions:
        sub = sorted((r for r in rows if r["function"] == name),
                     key=lambda r: r["t"])
        ts = np.array([r["t"] for r in sub])
        means = np.array([r["mean_abs_residual"] for r in sub])
        ax.loglog(ts, means, "o-", label=f"{name}: mean |residual|")
        guide = np.array([r["lambda"] / math.log(r["t"]) for r in sub])
        # anchor the guide line at the first data point
        guide *= means[0] / guide[0]
        ax.loglog(ts, guide, "k--", lw=0.8,
                  label=r"$\lambda/\log t$ guide")
    ax.set_xlabel("t")
    ax.set_ylabel("mean |residual|")
    ax.set_title("explicit-formula residual scaling")
    ax.legend()
    return [_save(fig, out_dir, "residual_scaling", fmt)]


def render_cov(in_dir, out_dir, fmt: str = "png"):
    """Empirical and predicted covariance heatmaps, Frobenius annotated."""
    path = pathlib.Path(in_dir) / "covariance.json"
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    for key in ("functions", "empirical", "theoretical",
                "frobenius_relative_distance"):
        if key not in payload:
            raise SchemaError(f"{path}: missing key '{key}'")
    emp = np.asarray(payload["empirical"], dtype=float)
    theo = np.asarray(payload["theoretical"], dtype=float)
    if emp.size == 0:
        raise EmptyDataError(f"{path}: empty matrices")
    names = payload["functions"]
    vmax = float(max(np.abs(emp).max(), np.abs(theo).max()))

    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.4))
    for ax, mat, title in ((axes[0], emp, "empirical"),
                           (axes[1], theo, "predicted")):
        im = ax.imshow(mat, vmin=-vmax, vmax=vmax, cmap="RdBu_r")
        ax.set_title(title)
        ax.set_xticks(range(len(names)), names, rotation=45, ha="right")
        ax.set_yticks(range(len(names)), names)
        for i in range(mat.shape[0]):
            for j in range(mat.shape[1]):
                ax.text(j, i, f"{mat[i, j]:.3f}", ha="center", va="center",
                        fontsize=8)
    fig.colorbar(im, ax=axes, shrink=0.8)
    frob = payload["frobenius_relative_distance"]
    fig.suptitle(f"covariance, Frobenius relative distance = {frob:.3f}")
    return [_save(fig, out_dir, "cov_heatmap", fmt)]
