"""Both sides of the approximate explicit formula, with diagnostics.

Zero side: the centered linear statistic sum_gamma f(lambda(gamma - omega t))
minus (log t)/(2 pi lambda) * integral of f.  Prime side: the smoothed prime
sum (1/2 lambda) sum_n Lambda_u(n) n^{-1/2} (fhat(log n/lambda) n^{i omega t}
+ fhat(-log n/lambda) n^{-i omega t}).  Plus diagonal, tail-condition and
Montgomery-Vaughan diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, CoverageError, DomainError, ResourceError
from .primes import PrimeTable, lambda_u_array
from .testfns import NormBundle, TestFunction, norm_bundle, sigma_t_sq
from .zeros import ZeroTable

TWO_PI = 2.0 * math.pi

_WINDOW_TOL = 1e-14  # per-zero truncation tolerance for the window cut


@dataclass(frozen=True)
class ScalePoint:
    """One evaluation scale: random phase omega, height t, zoom lambda, smoothing u.

    u defaults to t^alpha with alpha = 1/2, the operative smoothing height.
    """

    omega: float
    t: float
    lam: float
    alpha: float = 0.5
    u: float | None = None

    def __post_init__(self):
        if not (1.0 < self.omega < 2.0):
            raise DomainError(f"omega must lie in (1, 2), got {self.omega}")
        if self.t < 100.0:
            raise DomainError(f"t must be >= 100, got {self.t}")
        if not (0.0 < self.lam < math.log(self.t)):
            raise DomainError(
                f"mesoscopic regime requires 0 < lambda < log t = "
                f"{math.log(self.t):.4f}, got {self.lam}"
            )
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.u is None:
            object.__setattr__(self, "u", self.t ** self.alpha)

    @property
    def omega_t(self) -> float:
        return self.omega * self.t


@dataclass(frozen=True)
class LinStatSample:
    """One evaluation of both sides of the explicit formula at a ScalePoint."""

    scale: ScalePoint
    zero_side: float
    prime_side_full: float
    prime_side_primes_only: float
    prime_side_powers_only: float
    residual: float
    truncation_report: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DiagonalReport:
    """Prime diagonal second moment against its limiting integral."""

    sum_bpt_sq: float
    main_integral: float
    remainder_integral: float
    ratio: float


# ---------------------------------------------------------------------------
# Zero side
# ---------------------------------------------------------------------------

def zero_side_stat(
    f: TestFunction, zeros: ZeroTable, scale: ScalePoint,
    return_report: bool = False,
):
    """Centered linear statistic of the zero ordinates at ``scale``.

    Sums f(lambda(gamma - omega t)) over the positive ordinates and their
    mirrored negatives inside the window where |f| exceeds the truncation
    tolerance, then subtracts (log t)/(2 pi lambda) times the integral of f.
    """
    lam = scale.lam
    radius = f.radius(_WINDOW_TOL)
    half_window = radius / lam
    center = scale.omega_t
    required = center + half_window
    if zeros.height < required:
        raise CoverageError(
            f"zero table reaches {zeros.height} but the window needs "
            f"{required:.3f}", required_height=required,
        )
    gam = zeros.in_range(center - half_window, center + half_window)
    total = float(np.sum(f.f(lam * (gam - center)))) if len(gam) else 0.0
    # mirrored negative ordinates -gamma; empty unless the window reaches
    # below zero, kept for exactness of the multiset definition
    neg = zeros.in_range(-(center + half_window), -(center - half_window))
    if len(neg):
        total += float(np.sum(f.f(lam * (-neg - center))))
    centering = math.log(scale.t) / (TWO_PI * lam) * f.integral
    value = total - centering
    if not return_report:
        return value
    report = {
        "window": (center - half_window, center + half_window),
        "zeros_in_window": int(len(gam) + len(neg)),
        "truncation_bound": _WINDOW_TOL * 2.0 * len(zeros),
    }
    return value, report


# ---------------------------------------------------------------------------
# Prime side
# ---------------------------------------------------------------------------

class PrimeSideEvaluator:
    """Precomputed coefficients of the smoothed prime sum for repeated omega.

    The per-n coefficients Lambda_u(n) n^{-1/2} fhat(+-log n/lambda) are fixed
    by (f, lambda, u); evaluation at omega*t only needs one complex phase per n.
    """

    def __init__(self, f: TestFunction, lam: float, u: float, table: PrimeTable):
        if lam <= 0:
            raise DomainError(f"lambda must be > 0, got {lam}")
        if u <= 1:
            raise DomainError(f"u must be > 1, got {u}")
        if table.limit < u * u:
            raise ResourceError(
                f"sieve reaches {table.limit} but the smoothed sum needs u^2 = "
                f"{u * u:.0f}"
            )
        n, log_n, log_p = table.power_arrays()
        keep = n <= u * u
        n, log_n, log_p = n[keep], log_n[keep], log_p[keep]
        w = lambda_u_array(n, log_p, u) / np.sqrt(n)
        self.lam = lam
        self.u = u
        self.log_n = log_n
        self.power_k = np.rint(log_n / log_p).astype(np.int64)
        self.is_prime = self.power_k == 1
        self.coef_pos = w * np.asarray(f.fhat(log_n / lam), dtype=complex)
        self.coef_neg = w * np.asarray(f.fhat(-log_n / lam), dtype=complex)

    def _mask(self, mode: str) -> np.ndarray | slice:
        if mode == "all":
            return slice(None)
        if mode == "primes_only":
            return self.is_prime
        if mode == "powers_only":
            return ~self.is_prime
        if mode == "squares_only":
            return self.power_k == 2
        raise DomainError(f"unknown mode {mode!r}")

    def __call__(self, omega_t: float, mode: str = "all") -> float:
        m = self._mask(mode)
        phase = np.exp(1j * omega_t * self.log_n[m])
        val = (np.sum(self.coef_pos[m] * phase) + np.sum(self.coef_neg[m] / phase))
        val /= 2.0 * self.lam
        if abs(val.imag) > 1e-10:
            raise AccuracyError(
                f"prime-side imaginary defect {val.imag:.3e} exceeds 1e-10; "
                "is the test function real-valued?"
            )
        return float(val.real)

    def parts(self, omega_t: float) -> tuple[float, float]:
        """(primes_only, powers_only) with one phase evaluation."""
        phase = np.exp(1j * omega_t * self.log_n)
        term = self.coef_pos * phase + self.coef_neg / phase
        pr = np.sum(term[self.is_prime]) / (2.0 * self.lam)
        pw = np.sum(term[~self.is_prime]) / (2.0 * self.lam)
        if max(abs(pr.imag), abs(pw.imag)) > 1e-10:
            raise AccuracyError(
                f"prime-side imaginary defect {max(abs(pr.imag), abs(pw.imag)):.3e} "
                "exceeds 1e-10; is the test function real-valued?"
            )
        return float(pr.real), float(pw.real)

    def diagonal_second_moment(self, mode: str = "all") -> float:
        """Sum of |coefficient|^2 terms: the omega-averaged |sum|^2 proxy."""
        m = self._mask(mode)
        c = np.abs(self.coef_pos[m]) ** 2 + np.abs(self.coef_neg[m]) ** 2
        return float(np.sum(c)) / (2.0 * self.lam) ** 2


def prime_side_stat(
    f: TestFunction, scale: ScalePoint, table: PrimeTable, mode: str = "all"
) -> float:
    """The smoothed prime sum at one scale point (one-shot convenience)."""
    ev = PrimeSideEvaluator(f, scale.lam, scale.u, table)
    return ev(scale.omega_t, mode)


def explicit_residual(
    f: TestFunction, zeros: ZeroTable, scale: ScalePoint, table: PrimeTable,
    evaluator: PrimeSideEvaluator | None = None,
    bundle: NormBundle | None = None,
) -> LinStatSample:
    """Both sides of the explicit formula plus the predicted error envelope."""
    zs, report = zero_side_stat(f, zeros, scale, return_report=True)
    ev = evaluator or PrimeSideEvaluator(f, scale.lam, scale.u, table)
    primes_only = ev(scale.omega_t, "primes_only")
    powers_only = ev(scale.omega_t, "powers_only")
    full = primes_only + powers_only
    nb = bundle or norm_bundle(f)
    report["envelope"] = scale.lam / math.log(scale.t) * nb.error_factor(scale.t)
    return LinStatSample(
        scale=scale, zero_side=zs, prime_side_full=full,
        prime_side_primes_only=primes_only, prime_side_powers_only=powers_only,
        residual=zs - full, truncation_report=report,
    )


def prime_power_share(
    f: TestFunction, scale: ScalePoint, table: PrimeTable,
    omegas: np.ndarray | None = None,
) -> float:
    """Second-moment share of proper prime powers relative to primes.

    With an omega sample the ratio is empirical over the full power sum;
    otherwise it is the exact diagonal proxy over the p^2 terms (higher powers
    are negligible and phases average out).  Degenerate 0/0 returns 0.
    """
    ev = PrimeSideEvaluator(f, scale.lam, scale.u, table)
    if omegas is None:
        num = ev.diagonal_second_moment("squares_only")
        den = ev.diagonal_second_moment("primes_only")
    else:
        pw = np.array([ev(w * scale.t, "powers_only") for w in omegas])
        pr = np.array([ev(w * scale.t, "primes_only") for w in omegas])
        num = float(np.mean(pw * pw))
        den = float(np.mean(pr * pr))
    if den == 0.0:
        return 0.0
    return num / den


# ---------------------------------------------------------------------------
# Diagonal and tail diagnostics
# ---------------------------------------------------------------------------

def diagonal_report(
    f: TestFunction, t: float, lam: float, u: float, table: PrimeTable
) -> DiagonalReport:
    """Prime diagonal sum_p |b_pt|^2 against its limiting integral.

    b_pt = Lambda_u(p) / (lambda sqrt(p)) * fhat(log p / lambda); the limit is
    the integral of xi |fhat(xi)|^2 over (0, log t / (2 lambda)), with the
    taper's overshoot reported over (log t / (2 lambda), log t / lambda).
    """
    if table.limit < u * u:
        raise ResourceError(
            f"sieve reaches {table.limit} but the diagonal sum needs {u * u:.0f}"
        )
    p = table.primes[table.primes <= u * u].astype(np.float64)
    log_p = np.log(p)
    w = lambda_u_array(p, log_p, u) / (lam * np.sqrt(p))
    b = w * np.abs(f.fhat(log_p / lam))
    total = float(np.sum(b * b))

    from .testfns import _integrate_panels  # shared panel quadrature

    osc = 2.0 * f.radius(1e-10)
    hi_main = math.log(t) / (2.0 * lam)
    hi_rem = math.log(t) / lam

    def integrand(xi):
        return xi * np.abs(f.fhat(xi)) ** 2

    main = _integrate_panels(integrand, 0.0, hi_main, osc)
    rem = _integrate_panels(integrand, hi_main, hi_rem, osc)
    return DiagonalReport(
        sum_bpt_sq=total, main_integral=main, remainder_integral=rem,
        ratio=total / main if main > 0 else math.inf,
    )


def tail_condition(
    f: TestFunction, t: float, lam: float, u: float, m: float, table: PrimeTable
) -> float:
    """Normalized prime tail sum_{p > m} |a_pt|^2 (1 + p/t).

    a_pt = sigma_t^{-1} lambda^{-1} Lambda_u(p) p^{-1/2} fhat(log p/lambda).
    """
    if m >= u * u:
        return 0.0
    if table.limit < u * u:
        raise ResourceError(
            f"sieve reaches {table.limit} but the tail sum needs {u * u:.0f}"
        )
    var = sigma_t_sq(f, lam)
    if var <= 0:
        raise DomainError("sigma_t^2 vanishes; tail condition undefined")
    p = table.primes[(table.primes > m) & (table.primes <= u * u)].astype(np.float64)
    if len(p) == 0:
        return 0.0
    log_p = np.log(p)
    a = lambda_u_array(p, log_p, u) / (lam * np.sqrt(p)) * np.abs(
        f.fhat(log_p / lam)
    )
    return float(np.sum(a * a * (1.0 + p / t))) / var


def tail_cutoff(t: float, f: TestFunction, lam: float) -> float:
    """The proof's operative cutoff m_t = exp(log t / sigma_t)."""
    sigma = math.sqrt(sigma_t_sq(f, lam))
    return math.exp(math.log(t) / sigma)


# ---------------------------------------------------------------------------
# Montgomery-Vaughan diagnostic
# ---------------------------------------------------------------------------

def mv_check(
    coefficients, frequencies, t: float, c: float = 3.0 * math.pi
) -> dict:
    """Mean-square bound for the exponential sum sum_r a_r e^{i lambda_r s}.

    lhs = (1/t) Integral_t^{2t} |sum|^2 ds (evaluated in closed form per term
    pair); rhs = sum |a_r|^2 (1 + c/(t delta_r)) with delta_r the distance to
    the nearest other frequency.
    """
    a = np.asarray(coefficients, dtype=complex)
    freq = np.asarray(frequencies, dtype=np.float64)
    if len(a) != len(freq):
        raise DomainError("coefficient and frequency lists differ in length")
    if t <= 0:
        raise DomainError(f"t must be > 0, got {t}")
    if len(freq) > 1:
        delta = np.diff(np.sort(freq))
        if np.min(delta) == 0.0:
            raise DomainError("frequencies must be distinct (delta_r = 0)")
    # lhs: each pair (r, q) integrates to a_r conj(a_q) * closed-form phase mean
    d = freq[:, None] - freq[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        mean_phase = (np.exp(2j * t * d) - np.exp(1j * t * d)) / (1j * t * d)
    np.fill_diagonal(mean_phase, 1.0)
    lhs = float(np.real(np.einsum("r,q,rq->", a, np.conj(a), mean_phase)))

    if len(freq) == 1:
        rhs = float(np.abs(a[0]) ** 2)
    else:
        order = np.argsort(freq)
        gaps = np.diff(freq[order])
        near = np.empty(len(freq))
        near[order[0]] = gaps[0]
        near[order[-1]] = gaps[-1]
        if len(freq) > 2:
            near[order[1:-1]] = np.minimum(gaps[:-1], gaps[1:])
        rhs = float(np.sum(np.abs(a) ** 2 * (1.0 + c / (t * near))))
    # the bound is non-strict (equality for a single term), so compare with
    # rounding slack
    holds = lhs <= rhs + 1e-12 * max(abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "holds": holds}
