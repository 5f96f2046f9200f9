"""Locate, count, persist and ingest nontrivial-zero ordinates.

Scanning is Gram-point guided: Z is sampled on every Gram interval, blocks
violating Gram's law are subdivided, and completeness is certified globally
by anchoring the count at a good Gram point (Z(g_n) * (-1)^n > 0).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.special import lambertw

from .errors import CertificationError, DomainError, ParseError
from .zeta import TWO_PI, theta_deriv_vec, theta_vec, z_vec

DATA_DIR_ENV = "ZETALAB_DATA"

_SCAN_FLOOR = 9.6  # just below g_{-1}; no zeros exist underneath
_CHUNK = 1 << 15


@dataclass(frozen=True)
class ZeroTable:
    """Ascending positive ordinates gamma with certified coverage on (0, height]."""

    ordinates: np.ndarray
    height: float
    precision: float
    provenance: str = "computed"

    def __post_init__(self):
        ord_ = np.asarray(self.ordinates, dtype=np.float64)
        object.__setattr__(self, "ordinates", ord_)
        if len(ord_) and not np.all(np.diff(ord_) > 0):
            raise DomainError("zero ordinates must be strictly ascending")
        if len(ord_) and ord_[-1] > self.height + self.precision:
            raise DomainError("ordinate exceeds declared height")

    def __len__(self) -> int:
        return len(self.ordinates)

    def in_range(self, lo: float, hi: float) -> np.ndarray:
        i = np.searchsorted(self.ordinates, lo, side="left")
        j = np.searchsorted(self.ordinates, hi, side="right")
        return self.ordinates[i:j]


def data_dir() -> str | None:
    return os.environ.get(DATA_DIR_ENV)


# ---------------------------------------------------------------------------
# Gram points
# ---------------------------------------------------------------------------

def gram_points(n: np.ndarray) -> np.ndarray:
    """g_n with theta(g_n) = n*pi, for integer n >= -1, to ~1e-11."""
    n = np.asarray(n, dtype=np.float64)
    m = n + 0.125
    y = lambertw(np.maximum(m, -0.875) / math.e).real
    g = np.where(np.abs(y) > 1e-12, TWO_PI * m / np.where(y == 0, 1.0, y), 18.0)
    g = np.clip(g, _SCAN_FLOOR, None)
    target = n * math.pi
    for _ in range(4):
        g = g - (theta_vec(g) - target) / theta_deriv_vec(g)
        g = np.clip(g, _SCAN_FLOOR, None)
    return g


def gram_index_below(t: float) -> int:
    """Largest n with g_n <= t."""
    th = theta_vec(np.float64(t))
    return int(math.floor(th / math.pi))


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------

def _sample_grid(g: np.ndarray, subdiv: int) -> np.ndarray:
    """Points partitioning each Gram interval [g_i, g_{i+1}] into ``subdiv`` pieces."""
    frac = np.linspace(0.0, 1.0, subdiv, endpoint=False)
    pts = g[:-1, None] + np.diff(g)[:, None] * frac[None, :]
    return np.append(pts.ravel(), g[-1])


def _brackets_from_signs(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """(k, 2) array of [lo, hi] sign-change brackets of z on grid x."""
    s = np.sign(z)
    # treat exact zeros as positive; bisection still converges into them
    s[s == 0] = 1.0
    idx = np.flatnonzero(s[:-1] * s[1:] < 0)
    return np.stack([x[idx], x[idx + 1]], axis=1)


def _z_chunked(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    for i in range(0, len(x), _CHUNK):
        out[i : i + _CHUNK] = z_vec(x[i : i + _CHUNK])
    return out


def _refine(brackets: np.ndarray, precision: float) -> np.ndarray:
    """Vectorized bisection of sign-change brackets down to ``precision``."""
    if len(brackets) == 0:
        return np.empty(0)
    lo = brackets[:, 0].copy()
    hi = brackets[:, 1].copy()
    zlo = _z_chunked(lo)
    width = float(np.max(hi - lo))
    n_iter = max(1, int(math.ceil(math.log2(width / precision))) + 2)
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        zmid = _z_chunked(mid)
        left = zlo * zmid <= 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        zlo = np.where(left, zlo, zmid)
    return 0.5 * (lo + hi)


def _scan_brackets(n_hi: int, subdiv: int = 6) -> tuple[np.ndarray, int]:
    """Bracket every zero between g_{-1} and the first good Gram point >= g_{n_hi}.

    Returns (brackets, m) where m is the anchor Gram index: the certified zero
    count below g_m is m + 1.
    """
    # find a good anchor Gram point at or above n_hi
    m = n_hi
    while True:
        gm = float(gram_points(np.array([m]))[0])
        if float(z_vec(np.array([gm]))[0]) * (-1.0) ** m > 0:
            break
        m += 1
        if m > n_hi + 200:
            raise CertificationError(
                f"no good Gram point found in [{n_hi}, {n_hi + 200}]"
            )

    idx = np.arange(-1, m + 1)
    g = gram_points(idx)
    z_g = _z_chunked(g)
    signs = np.where(idx % 2 == 0, 1.0, -1.0)
    good = z_g * signs > 0  # Gram's law holds at these Gram points
    good[0] = good[-1] = True  # endpoints anchored by construction

    grid = _sample_grid(g, subdiv)
    z = _z_chunked(grid)
    brackets = _brackets_from_signs(grid, z)
    expected = m + 1

    factor = 64
    attempts = 0
    while len(brackets) < expected and attempts < 2:
        # blocks between consecutive good Gram points carry a known count;
        # resample deficient ones at ``factor`` times the density
        good_idx = np.flatnonzero(good)
        counts = np.histogram(
            0.5 * (brackets[:, 0] + brackets[:, 1]), bins=g[good_idx]
        )[0]
        new_parts = [brackets]
        for b, (j0, j1) in enumerate(zip(good_idx[:-1], good_idx[1:])):
            if counts[b] >= j1 - j0:
                continue
            sub = _sample_grid(g[j0 : j1 + 1], subdiv * factor)
            found = _brackets_from_signs(sub, _z_chunked(sub))
            keep = ~(
                (new_parts[0][:, 0] >= g[j0]) & (new_parts[0][:, 1] <= g[j1])
            )
            new_parts[0] = new_parts[0][keep]
            new_parts.append(found)
        brackets = np.concatenate(new_parts)
        brackets = brackets[np.argsort(brackets[:, 0])]
        factor *= 64
        attempts += 1

    if len(brackets) != expected:
        raise CertificationError(
            f"found {len(brackets)} sign changes below g_{m} but certified count "
            f"is {expected}; offending scan range ({float(g[0]):.6f}, {float(g[-1]):.6f})"
        )
    return brackets, m


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def find_zeros(t1: float, t2: float, precision: float = 1e-9) -> ZeroTable:
    """All zero ordinates in [t1, t2], certified complete, refined to ``precision``."""
    if not (10.0 <= t1 < t2 <= 1e7):
        raise DomainError(f"need 10 <= t1 < t2 <= 1e7, got ({t1}, {t2})")
    if precision < 1e-9:
        raise DomainError(f"precision must be >= 1e-9, got {precision}")
    n_hi = gram_index_below(t2) + 2
    brackets, _m = _scan_brackets(n_hi)
    # refine only brackets that can intersect [t1, t2]
    sel = (brackets[:, 1] >= t1) & (brackets[:, 0] <= t2)
    ordinates = _refine(brackets[sel], precision)
    ordinates = ordinates[(ordinates >= t1) & (ordinates <= t2)]
    ordinates.sort()
    if len(ordinates) > 1 and np.min(np.diff(ordinates)) < 2.0 * precision:
        raise CertificationError(
            "two ordinates within twice the requested precision; "
            "multiplicity > 1 is not supported"
        )
    return ZeroTable(
        ordinates=ordinates, height=t2, precision=precision, provenance="computed"
    )


def count_zeros(T: float) -> int:
    """Certified N(T): the number of zeros with 0 < gamma <= T."""
    if T < 10.0:
        raise DomainError(f"count_zeros requires T >= 10, got {T}")
    n_hi = gram_index_below(T) + 2
    brackets, _m = _scan_brackets(n_hi)
    below = brackets[:, 1] <= T
    count = int(np.count_nonzero(below))
    straddle = (~below) & (brackets[:, 0] < T)
    if straddle.any():
        refined = _refine(brackets[straddle], 1e-9)
        count += int(np.count_nonzero(refined <= T))
    return count


def riemann_von_mangoldt_main(T: float) -> float:
    """Main terms of the zero-counting asymptotic (no O(log T) remainder)."""
    return T / TWO_PI * math.log(T) - (1.0 + math.log(TWO_PI)) / TWO_PI * T


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def save_zero_table(table: ZeroTable, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# height={table.height!r}\n")
        fh.write(f"# precision={table.precision!r}\n")
        fh.write(f"# provenance={table.provenance}\n")
        for g in table.ordinates:
            fh.write(f"{float(g)!r}\n")


def load_zero_table(
    path: str | os.PathLike,
    declared_height: float | None = None,
    declared_precision: float | None = None,
    verify_count: bool = False,
) -> ZeroTable:
    """Read a zero table; '#' lines carry metadata, then one ordinate per line."""
    height = declared_height
    precision = declared_precision
    provenance = f"ingested({os.path.basename(str(path))})"
    ordinates: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    key = key.strip()
                    if key == "height" and height is None:
                        height = float(val)
                    elif key == "precision" and precision is None:
                        precision = float(val)
                continue
            try:
                val = float(line)
            except ValueError as exc:
                raise ParseError(
                    f"{path}:{lineno}: not a number: {line!r}", line_number=lineno
                ) from exc
            if ordinates and val <= ordinates[-1]:
                raise ParseError(
                    f"{path}:{lineno}: ordinate {val!r} not ascending",
                    line_number=lineno,
                )
            ordinates.append(val)
    if height is None:
        height = ordinates[-1] if ordinates else 0.0
    if precision is None:
        precision = 1e-8
    table = ZeroTable(
        ordinates=np.array(ordinates),
        height=float(height),
        precision=float(precision),
        provenance=provenance,
    )
    if verify_count and table.height <= 1e7:
        expected = count_zeros(table.height)
        if expected != len(table):
            raise CertificationError(
                f"table lists {len(table)} ordinates below {table.height} "
                f"but certified count is {expected}"
            )
    return table


def cached_zero_table(height: float, precision: float = 1e-9) -> ZeroTable:
    """find_zeros(10, height) with an on-disk cache in $ZETALAB_DATA if set."""
    d = data_dir()
    if d:
        os.makedirs(d, exist_ok=True)
        path = os.path.join(d, f"zeros_{height:g}_{precision:g}.txt")
        if os.path.exists(path):
            return load_zero_table(path)
        table = find_zeros(10.0, height, precision)
        save_zero_table(table, path)
        return table
    return find_zeros(10.0, height, precision)
