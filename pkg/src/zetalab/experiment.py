"""Monte Carlo experiments: Gaussian fluctuations of the linear statistics.

Samples omega ~ Uniform(1, 2) from a counter-based generator (numpy Philox
keyed through SeedSequence, so streams are reproducible and order
independent), evaluates the requested statistics, and aggregates moments,
normality distance and covariance structure.  All CSV output is deterministic
given (config, tables).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linstat, primes, testfns, zeros
from .errors import ConfigError, CoverageError, DomainError, ResourceError

CSV_HEADER = "omega,t,lambda,u,zero_side,prime_full,prime_primes,prime_powers,residual,normalized"


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaRule:
    """Zoom-scale rule: fixed lambda, or power meaning lambda = c (log t)^beta."""

    kind: str  # "fixed" | "power"
    c: float = 1.0
    beta: float = 0.7

    def __post_init__(self):
        if self.kind not in ("fixed", "power"):
            raise ConfigError(f"lambda_rule kind must be fixed|power, got {self.kind!r}")
        if self.kind == "power" and not (0.0 < self.beta < 1.0):
            raise ConfigError(f"power rule needs 0 < beta < 1, got {self.beta}")
        if self.c <= 0:
            raise ConfigError(f"lambda_rule coefficient must be > 0, got {self.c}")

    def lam(self, t: float) -> float:
        if self.kind == "fixed":
            return self.c
        return self.c * math.log(t) ** self.beta

    @staticmethod
    def fixed(lam: float) -> "LambdaRule":
        return LambdaRule(kind="fixed", c=lam, beta=0.0)

    @staticmethod
    def power(c: float = 1.0, beta: float = 0.7) -> "LambdaRule":
        return LambdaRule(kind="power", c=c, beta=beta)


@dataclass(frozen=True)
class ExperimentConfig:
    t_list: tuple
    n_samples: int
    seed: int
    functions: tuple  # specs like "gaussian:0,1"
    lambda_rule: LambdaRule = field(default_factory=LambdaRule.power)
    alpha: float = 0.5
    side: str = "prime"  # zero | prime | both
    normalize: str = "none"  # none | sigma_t
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "t_list", tuple(float(t) for t in self.t_list))
        object.__setattr__(self, "functions", tuple(self.functions))
        if self.n_samples < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.side not in ("zero", "prime", "both"):
            raise ConfigError(f"side must be zero|prime|both, got {self.side!r}")
        if self.normalize not in ("none", "sigma_t"):
            raise ConfigError(
                f"normalize must be none|sigma_t, got {self.normalize!r}"
            )
        if not self.t_list:
            raise ConfigError("t_list must be nonempty")
        for t in self.t_list:
            if self.lambda_rule.lam(t) >= math.log(t):
                raise ConfigError(
                    f"lambda({t:g}) = {self.lambda_rule.lam(t):.4f} leaves the "
                    f"mesoscopic regime (log t = {math.log(t):.4f})"
                )
        for spec in self.functions:
            testfns.builtin_from_spec(spec)  # raises DomainError if malformed

    def to_dict(self) -> dict:
        d = asdict(self)
        d["t_list"] = list(self.t_list)
        d["functions"] = list(self.functions)
        d["lambda_rule"] = asdict(self.lambda_rule)
        return d

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        d = dict(d)
        lr = d.get("lambda_rule", {"kind": "power", "c": 1.0, "beta": 0.7})
        if isinstance(lr, dict):
            d["lambda_rule"] = LambdaRule(**lr)
        return ExperimentConfig(**d)


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    theoretical_variance: float
    moment_5: float = 0.0  # standardized, emitted for inspection only
    moment_6: float = 0.0


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

def omega_draws(seed: int, stream: int, n: int) -> np.ndarray:
    """n Uniform(1,2) draws from the Philox stream (seed, stream)."""
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(
        entropy=seed, spawn_key=(stream,)
    )))
    return 1.0 + gen.random(n)


def ks_statistic(samples, mean: float, variance: float) -> float:
    """Sup distance between the empirical CDF and Normal(mean, variance)."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    if len(x) == 0:
        raise DomainError("ks_statistic requires a nonempty sample")
    if variance <= 0:
        raise DomainError(f"reference variance must be > 0, got {variance}")
    z = (x - mean) / math.sqrt(2.0 * variance)
    cdf = 0.5 * (1.0 + np.array([math.erf(v) for v in z]))
    n = len(x)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(np.abs(grid_hi - cdf), np.abs(grid_lo - cdf))))


def _summary(samples: np.ndarray, theoretical_variance: float) -> SummaryStats:
    n = len(samples)
    mean = float(np.mean(samples))
    c = samples - mean
    var = float(np.mean(c * c))
    sd = math.sqrt(var) if var > 0 else 1.0
    return SummaryStats(
        n=n, mean=mean, variance=var,
        skewness=float(np.mean(c**3)) / sd**3,
        excess_kurtosis=float(np.mean(c**4)) / sd**4 - 3.0,
        ks_distance=ks_statistic(samples, 0.0, theoretical_variance),
        theoretical_variance=theoretical_variance,
        moment_5=float(np.mean(c**5)) / sd**5,
        moment_6=float(np.mean(c**6)) / sd**6,
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _resources(config: ExperimentConfig, prime_table, zero_table):
    """Sieve and zero tables sized for the whole run (built or validated)."""
    need_primes = config.side in ("prime", "both")
    need_zeros = config.side in ("zero", "both")
    cache = zeros.data_dir()
    if need_primes:
        u2 = max(t ** (2.0 * config.alpha) for t in config.t_list)
        limit = int(math.ceil(u2)) + 1
        if prime_table is None:
            prime_table = primes.cached_sieve(limit, cache)
        elif prime_table.limit < u2:
            raise ResourceError(
                f"supplied sieve reaches {prime_table.limit}, need {u2:.0f}"
            )
    if need_zeros:
        pad = max(
            testfns.builtin_from_spec(s).radius(1e-14) for s in config.functions
        ) / min(config.lambda_rule.lam(t) for t in config.t_list)
        height = 2.0 * max(config.t_list) + pad + 1.0
        if zero_table is None:
            zero_table = zeros.cached_zero_table(float(math.ceil(height)))
        elif zero_table.height < height:
            raise CoverageError(
                f"supplied zero table reaches {zero_table.height}, need "
                f"{height:.1f}", required_height=height,
            )
    return prime_table, zero_table


def _sample_rows(config, f, t, t_index, prime_table, zero_table):
    """All per-omega statistics for one (function, t) cell.

    Returns (omegas, columns dict, primary statistic array, sigma_t^2).
    """
    lam = config.lambda_rule.lam(t)
    u = t ** config.alpha
    om = omega_draws(config.seed, t_index, config.n_samples)
    nan = np.full(config.n_samples, math.nan)
    cols = {k: nan.copy() for k in (
        "zero_side", "prime_full", "prime_primes", "prime_powers", "residual"
    )}
    if config.side in ("prime", "both"):
        ev = linstat.PrimeSideEvaluator(f, lam, u, prime_table)
        both = np.array([ev.parts(w * t) for w in om])
        cols["prime_primes"] = both[:, 0]
        cols["prime_powers"] = both[:, 1]
        cols["prime_full"] = cols["prime_primes"] + cols["prime_powers"]
    if config.side in ("zero", "both"):
        cols["zero_side"] = np.array([
            linstat.zero_side_stat(
                f, zero_table,
                linstat.ScalePoint(omega=w, t=t, lam=lam, alpha=config.alpha),
            )
            for w in om
        ])
    if config.side == "both":
        cols["residual"] = cols["zero_side"] - cols["prime_full"]
    primary = cols["zero_side"] if config.side in ("zero", "both") else cols["prime_full"]
    var_t = testfns.sigma_t_sq(f, lam)
    if config.normalize == "sigma_t":
        if var_t <= 0:
            raise ConfigError(f"{f.name}: sigma_t^2 = 0, cannot normalize")
        cols["normalized"] = primary / math.sqrt(var_t)
    else:
        cols["normalized"] = primary.copy()
    return om, cols, primary, var_t


def _write_csv(path: str, om, t, lam, u, cols) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for i in range(len(om)):
            fh.write(",".join([
                _fmt(om[i]), _fmt(t), _fmt(lam), _fmt(u),
                _fmt(cols["zero_side"][i]), _fmt(cols["prime_full"][i]),
                _fmt(cols["prime_primes"][i]), _fmt(cols["prime_powers"][i]),
                _fmt(cols["residual"][i]), _fmt(cols["normalized"][i]),
            ]) + "\n")


def _slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def run_clt(config: ExperimentConfig, prime_table=None, zero_table=None):
    """Monte Carlo normality check; returns {(fn_name, t): SummaryStats}.

    When config.output is set, writes one CSV per (function, t) cell plus a
    summary.json.  The KS reference is the centered Gaussian with the
    mode-appropriate theoretical variance: the full H^{1/2} norm when
    normalize = none, the truncated variance sigma_t^2 when normalize = sigma_t.
    """
    prime_table, zero_table = _resources(config, prime_table, zero_table)
    out = {}
    files = []
    for spec in config.functions:
        f = testfns.builtin_from_spec(spec)
        hh = testfns.h_half_inner(f, f)
        for ti, t in enumerate(config.t_list):
            om, cols, primary, var_t = _sample_rows(
                config, f, t, ti, prime_table, zero_table
            )
            theo = var_t if config.normalize == "sigma_t" else hh
            out[(f.name, t)] = _summary(primary, theo)
            if config.output:
                os.makedirs(config.output, exist_ok=True)
                path = os.path.join(
                    config.output, f"samples_{_slug(f.name)}_t{t:g}.csv"
                )
                _write_csv(path, om, t, config.lambda_rule.lam(t),
                           t ** config.alpha, cols)
                files.append(path)
    if config.output:
        summary = {
            f"{name}@t={t:g}": asdict(stats) for (name, t), stats in out.items()
        }
        with open(os.path.join(config.output, "summary.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return out


def run_covariance(config: ExperimentConfig, prime_table=None, zero_table=None):
    """Empirical covariance of the vector statistic vs the H^{1/2} Gram matrix.

    Uses the first entry of t_list; all functions must satisfy the smooth-CLT
    hypotheses.  Returns (empirical, theoretical, frobenius_relative_distance).
    """
    fns = [testfns.builtin_from_spec(s) for s in config.functions]
    for f in fns:
        rep = testfns.check_hypotheses(f)
        if not rep.smooth_clt_admissible:
            failed = [
                name for name, ok in (
                    ("decay", rep.decay_ok), ("bv_f1", rep.bv_f1_ok),
                    ("fourier_decay", rep.fourier_decay_ok),
                    ("h_half_finite", rep.h_half_finite),
                ) if not ok
            ]
            raise ConfigError(
                f"{f.name} is not admissible; failed condition(s): {failed}"
            )
    prime_table, zero_table = _resources(config, prime_table, zero_table)
    t = config.t_list[0]
    rows = []
    for f in fns:
        _om, _cols, primary, _var = _sample_rows(
            config, f, t, 0, prime_table, zero_table
        )
        rows.append(primary)
    sample_matrix = np.stack(rows)  # (n_fns, n_samples)
    empirical = np.cov(sample_matrix, bias=True)
    empirical = np.atleast_2d(empirical)
    k = len(fns)
    theoretical = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            theoretical[i, j] = theoretical[j, i] = testfns.h_half_inner(
                fns[i], fns[j]
            )
    frob = float(
        np.linalg.norm(empirical - theoretical) / np.linalg.norm(theoretical)
    )
    if config.output:
        os.makedirs(config.output, exist_ok=True)
        payload = {
            "functions": [f.name for f in fns],
            "t": t,
            "lambda": config.lambda_rule.lam(t),
            "n_samples": config.n_samples,
            "empirical": empirical.tolist(),
            "theoretical": theoretical.tolist(),
            "frobenius_relative_distance": frob,
        }
        with open(os.path.join(config.output, "covariance.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return empirical, theoretical, frob


def run_explicit_check(config: ExperimentConfig, prime_table=None, zero_table=None):
    """Residual scaling across t_list; requires side = both.

    Returns a list of rows {t, lambda, mean_abs_residual, max_abs_residual,
    envelope, n}; writes explicit.csv when output is set.
    """
    if config.side != "both":
        raise ConfigError("run_explicit_check requires side = both")
    prime_table, zero_table = _resources(config, prime_table, zero_table)
    rows = []
    for spec in config.functions:
        f = testfns.builtin_from_spec(spec)
        bundle = testfns.norm_bundle(f)
        for ti, t in enumerate(config.t_list):
            _om, cols, _primary, _var = _sample_rows(
                config, f, t, ti, prime_table, zero_table
            )
            res = cols["residual"]
            lam = config.lambda_rule.lam(t)
            rows.append({
                "function": f.name,
                "t": t,
                "lambda": lam,
                "mean_abs_residual": float(np.mean(np.abs(res))),
                "max_abs_residual": float(np.max(np.abs(res))),
                "envelope": lam / math.log(t) * bundle.error_factor(t),
                "n": config.n_samples,
            })
    if config.output:
        os.makedirs(config.output, exist_ok=True)
        path = os.path.join(config.output, "explicit.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("function,t,lambda,mean_abs_residual,max_abs_residual,"
                     "envelope,n\n")
            for r in rows:
                fh.write(",".join([
                    r["function"], _fmt(r["t"]), _fmt(r["lambda"]),
                    _fmt(r["mean_abs_residual"]), _fmt(r["max_abs_residual"]),
                    _fmt(r["envelope"]), str(r["n"]),
                ]) + "\n")
    return rows
