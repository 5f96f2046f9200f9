"""Special-function core: Riemann-Siegel theta and Z, Euler-Maclaurin zeta,
the logarithmic derivative, and Selberg's four-term decomposition.

All operations are pure; the vectorized internals (`theta_vec`, `z_vec`) are
what the zero scanner drives over large grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, SingularityError, CoverageError

TWO_PI = 6.283185307179586476925287
LOG_TWO_PI = 1.8378770664093454835607
PI = 3.1415926535897932384626434

# Bernoulli numbers B_2..B_12 (exact rationals evaluated in double precision)
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
)

_T_MIN = 10.0
_RS_SWITCH = 800.0  # below this, Z goes through the Euler-Maclaurin evaluator
# (the C0..C3 remainder reaches ~1e-9 absolute only past t ~ 800; the
# Euler-Maclaurin route is ~1e-13 and still cheap at these heights)


@dataclass(frozen=True)
class ComplexPoint:
    """A point s = sigma + i*tau in the half-plane sigma > 0."""

    sigma: float
    tau: float

    def as_complex(self) -> complex:
        return complex(self.sigma, self.tau)


# ---------------------------------------------------------------------------
# Riemann-Siegel theta
# ---------------------------------------------------------------------------

def theta_vec(t: np.ndarray) -> np.ndarray:
    """Asymptotic theta(t); caller guarantees t >= ~9.5."""
    t = np.asarray(t, dtype=np.float64)
    return (
        0.5 * t * np.log(t / TWO_PI)
        - 0.5 * t
        - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
    )


def theta(t: float) -> float:
    """Riemann-Siegel phase, absolute error <= 1e-10 on [10, 1e9].

    Uses the asymptotic expansion; below t = 10 the series is outside its
    documented accuracy regime and we refuse.
    """
    if t < _T_MIN:
        raise DomainError(f"theta requires t >= {_T_MIN} (asymptotic regime), got {t}")
    return float(theta_vec(np.float64(t)))


def theta_deriv_vec(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return 0.5 * np.log(t / TWO_PI) - 1.0 / (48.0 * t * t)


# ---------------------------------------------------------------------------
# Psi and its derivatives for the Riemann-Siegel correction terms
# ---------------------------------------------------------------------------

def _psi_complex(z: np.ndarray) -> np.ndarray:
    """Psi(z) = cos(2*pi*(z^2 - z - 1/16)) / cos(2*pi*z), entire."""
    return np.cos(TWO_PI * (z * z - z - 0.0625)) / np.cos(TWO_PI * z)


@lru_cache(maxsize=1)
def _psi_splines() -> dict[int, CubicSpline]:
    """Cubic splines of Psi^(m) on p in [0,1] for the orders the C-terms need.

    Derivatives come from Cauchy-integral contour moments (radius 0.4,
    128 half-offset nodes, which keeps nodes away from the real axis where
    cos(2*pi*z) vanishes).
    """
    orders = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9)
    n_grid, m_nodes, radius = 4097, 128, 0.4
    p = np.linspace(0.0, 1.0, n_grid)
    ang = TWO_PI * (np.arange(m_nodes) + 0.5) / m_nodes
    ring = radius * np.exp(1j * ang)
    vals = _psi_complex(p[:, None] + ring[None, :])  # (n_grid, m_nodes)
    splines = {}
    for m in orders:
        mom = (vals * np.exp(-1j * m * ang)[None, :]).mean(axis=1)
        deriv = math.factorial(m) / radius**m * mom.real
        splines[m] = CubicSpline(p, deriv)
    return splines


def _rs_corrections(p: np.ndarray) -> tuple[np.ndarray, ...]:
    """C0..C3 of the Riemann-Siegel remainder as functions of p = frac(sqrt(t/2pi))."""
    sp = _psi_splines()
    d = {m: sp[m](p) for m in (0, 1, 2, 3, 5, 6, 9)}
    c0 = d[0]
    c1 = -d[3] / (96.0 * PI**2)
    c2 = d[2] / (64.0 * PI**2) + d[6] / (18432.0 * PI**4)
    c3 = -d[1] / (64.0 * PI**2) - d[5] / (3840.0 * PI**4) - d[9] / (5308416.0 * PI**6)
    return c0, c1, c2, c3


# ---------------------------------------------------------------------------
# Z(t)
# ---------------------------------------------------------------------------

def _z_rs_vec(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel Z with correction terms C0..C3; for t >= ~100."""
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / TWO_PI)
    n_terms = np.floor(a).astype(np.int64)
    th = theta_vec(t)
    out = np.zeros_like(t)
    n_max = int(n_terms.max())
    # main sum, masked per point
    for n in range(1, n_max + 1):
        mask = n_terms >= n
        if not mask.any():
            break
        out[mask] += np.cos(th[mask] - t[mask] * math.log(n)) / math.sqrt(n)
    out *= 2.0
    p = a - n_terms
    c0, c1, c2, c3 = _rs_corrections(p)
    inv = 1.0 / a
    corr = c0 + inv * (c1 + inv * (c2 + inv * c3))
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    out += sign * corr / np.sqrt(a)
    return out


def _z_em_vec(t: np.ndarray) -> np.ndarray:
    """Z(t) = Re(e^{i theta} zeta(1/2+it)) through the Euler-Maclaurin evaluator."""
    t = np.asarray(t, dtype=np.float64)
    s = 0.5 + 1j * t
    z = _em_zeta_vec(s)
    return (np.exp(1j * theta_vec(t)) * z).real


def z_vec(t: np.ndarray) -> np.ndarray:
    """Vectorized Z for the zero scanner; t >= ~9.5."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    low = t < _RS_SWITCH
    if low.any():
        out[low] = _z_em_vec(t[low])
    if (~low).any():
        out[~low] = _z_rs_vec(t[~low])
    return out


def riemann_siegel_Z(t: float) -> float:
    """Hardy's Z function; |Z(t)| = |zeta(1/2+it)|, absolute error <= 1e-6 for t <= 1e7."""
    if t < _T_MIN:
        raise DomainError(f"riemann_siegel_Z requires t >= {_T_MIN}, got {t}")
    return float(z_vec(np.atleast_1d(np.float64(t)))[0])


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta
# ---------------------------------------------------------------------------

def _em_terms(s: complex, n_cut: int) -> tuple[complex, complex]:
    """(zeta(s), zeta'(s)) by Euler-Maclaurin with Bernoulli terms through B12."""
    n = np.arange(1, n_cut + 1, dtype=np.float64)
    logn = np.log(n)
    pw = np.exp(-s * logn)  # n^{-s}
    z = pw.sum()
    dz = -(logn * pw).sum()
    log_nc = math.log(n_cut)
    nc_pow = np.exp(-s * log_nc)  # N^{-s}
    # tail integral N^{1-s}/(s-1) and half-term -N^{-s}/2
    tail = nc_pow * n_cut / (s - 1.0)
    z += tail - 0.5 * nc_pow
    dz += tail * (-log_nc - 1.0 / (s - 1.0)) + 0.5 * log_nc * nc_pow
    # Bernoulli corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}
    poch = s
    poch_dlog = 1.0 / s  # d/ds log of the Pochhammer product
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI, start=1):
        fact *= (2 * k) * (2 * k - 1)
        coeff = b2k / fact
        npow = np.exp(-(s + 2 * k - 1) * log_nc)  # N^{1-s-2k}
        term = coeff * poch * npow
        z += term
        dz += term * (poch_dlog - log_nc)
        # extend the Pochhammer product to s(s+1)...(s+2k)
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        poch_dlog = poch_dlog + 1.0 / (s + 2 * k - 1) + 1.0 / (s + 2 * k)
    return z, dz


def _em_cut(s: complex) -> int:
    return max(32, int(math.ceil(1.5 * abs(s.imag))) + 8)


def _em_zeta_vec(s: np.ndarray) -> np.ndarray:
    """Vectorized zeta(s) for arrays of s with comparable |Im s| (one shared cut)."""
    s = np.asarray(s, dtype=np.complex128)
    n_cut = max(32, int(math.ceil(1.5 * float(np.abs(s.imag).max()))) + 8)
    n = np.arange(1, n_cut + 1, dtype=np.float64)
    logn = np.log(n)
    pw = np.exp(-s[..., None] * logn)
    z = pw.sum(axis=-1)
    log_nc = math.log(n_cut)
    nc_pow = np.exp(-s * log_nc)
    z += nc_pow * n_cut / (s - 1.0) - 0.5 * nc_pow
    poch = s.copy()
    fact = 1.0
    for k, b2k in enumerate(_BERNOULLI, start=1):
        fact *= (2 * k) * (2 * k - 1)
        z += (b2k / fact) * poch * np.exp(-(s + 2 * k - 1) * log_nc)
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
    return z


def _check_em_domain(s: ComplexPoint) -> complex:
    if not (math.isfinite(s.sigma) and math.isfinite(s.tau)):
        raise DomainError("s must be finite")
    if s.sigma <= 0.0:
        raise DomainError(f"Euler-Maclaurin evaluation requires sigma > 0, got {s.sigma}")
    sc = s.as_complex()
    if sc == 1.0:
        raise SingularityError("zeta has a pole at s = 1")
    if abs(s.tau) > 1e4:
        raise DomainError("|tau| <= 1e4 required (accuracy degrades beyond)")
    return sc


def euler_maclaurin_zeta(s: ComplexPoint) -> complex:
    """zeta(s) within 1e-10 for sigma > 0, |tau| <= 1e4."""
    sc = _check_em_domain(s)
    z, _ = _em_terms(sc, _em_cut(sc))
    return z


def euler_maclaurin_zeta_deriv(s: ComplexPoint) -> tuple[complex, complex]:
    """(zeta(s), zeta'(s)) by the differentiated Euler-Maclaurin sum."""
    sc = _check_em_domain(s)
    return _em_terms(sc, _em_cut(sc))


def zeta_logderiv(s: ComplexPoint) -> complex:
    """zeta'(s)/zeta(s); refuses evaluation when |zeta(s)| < 1e-12."""
    z, dz = euler_maclaurin_zeta_deriv(s)
    if abs(z) < 1e-12:
        raise SingularityError(
            f"zeta'({s.sigma}+{s.tau}i)/zeta: |zeta(s)| = {abs(z):.3e} is too small",
            abs_zeta=abs(z),
        )
    return dz / z


# ---------------------------------------------------------------------------
# Selberg's four-term decomposition of zeta'/zeta
# ---------------------------------------------------------------------------

@dataclass
class SelbergDecomposition:
    """The four terms of the smoothed decomposition at a point, plus diagnostics."""

    a_u: complex
    b_u: complex
    c_u: complex
    d_u: complex
    b_u_truncation_height: float
    b_u_tail_bound: float
    reference_logderiv: complex
    defect: float

    @property
    def total(self) -> complex:
        return self.a_u + self.b_u + self.c_u + self.d_u


def _b_u_tail_bound(u: float, sigma: float, tau: float, height: float) -> float:
    """Bound on the zero-sum tail beyond the table height.

    Each omitted term is at most (u^{1/2-sigma} + u^{1-2*sigma}) / log(u) times
    1/(gamma -+ tau)^2; the tail sum is estimated against the zero-counting
    density log(gamma)/(2*pi) for both signs of gamma.
    """
    amp = (u ** max(0.0, 0.5 - sigma) + u ** max(0.0, 1.0 - 2.0 * sigma)) / math.log(u)
    atau = abs(tau)
    # integral of log(y)/(2 pi (y -+ atau)^2) dy from height to infinity, both signs
    tail = 0.0
    for shift in (-atau, atau):
        d = height + shift  # distance from atau (resp. -atau) to the cut
        if d <= 1.0:
            d = 1.0
        # log(y) <= log(height) + (y - height)/height for y >= height
        tail += (math.log(height) / d + 1.0 / max(d, height * 0.5)) / TWO_PI
    return amp * tail


def selberg_decomposition(s: ComplexPoint, u: float, zeros) -> SelbergDecomposition:
    """Evaluate the four-term smoothed decomposition of zeta'/zeta at s.

    ``zeros`` is a ZeroTable whose ordinates must reach at least 2*|tau|.
    """
    if u <= 1.0:
        raise DomainError(f"smoothing height u must be > 1, got {u}")
    required = 2.0 * abs(s.tau)
    if zeros.height < required:
        raise CoverageError(
            f"zero table height {zeros.height} < required {required}",
            required_height=required,
        )
    sc = s.as_complex()
    logu = math.log(u)

    # A_u: smoothed prime sum over prime powers up to u^2
    from . import primes as _primes

    table = _primes.sieve(int(u * u))
    npow, lognpow, logp = table.power_arrays()
    lam_u = _primes.lambda_u_array(npow, logp, u)
    a_u = -np.sum(lam_u * np.exp(-sc * lognpow))

    # B_u: sum over supplied zeros, both signs
    gam = zeros.ordinates
    b_u = 0.0 + 0.0j
    for sign in (1.0, -1.0):
        rho = 0.5 + 1j * sign * gam
        d = rho - sc
        b_u += np.sum((np.exp(d * logu) - np.exp(2.0 * d * logu)) / (d * d))
    b_u /= logu
    tail = _b_u_tail_bound(u, s.sigma, s.tau, zeros.height)

    # C_u: trivial zeros, summed until terms fall below 1e-16
    c_u = 0.0 + 0.0j
    k = 1
    while True:
        den = 2.0 * k + sc
        term = (u ** (-2.0 * k) * np.exp(-sc * logu) - np.exp(-2.0 * den * logu)) / (den * den)
        c_u += term
        if abs(term) < 1e-16 or k > 10000:
            break
        k += 1
    c_u /= logu

    # D_u: pole term
    d_u = (np.exp(2.0 * (1.0 - sc) * logu) - np.exp((1.0 - sc) * logu)) / (
        logu * (1.0 - sc) ** 2
    )

    ref = zeta_logderiv(s)
    total = a_u + b_u + c_u + d_u
    return SelbergDecomposition(
        a_u=complex(a_u),
        b_u=complex(b_u),
        c_u=complex(c_u),
        d_u=complex(d_u),
        b_u_truncation_height=float(zeros.height),
        b_u_tail_bound=float(tail),
        reference_logderiv=ref,
        defect=float(abs(total - ref)),
    )
