"""Test-function calculus: transforms, norms, mollification, reconstruction."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from zetalab import testfns
from zetalab.errors import DomainError, UnboundedVariationError
from zetalab.testfns import TestFunction as TF
from zetalab.testfns import builtin, chi, chi_prime


GAUSS = builtin("gaussian", 0.0, 1.0)
IND01 = builtin("indicator", 0.0, 1.0)
IND11 = builtin("indicator", -1.0, 1.0)
TENT = builtin("tent", -1.0, 1.0)
C2 = builtin("c2_bump", 0.0, 1.0)
MOLL = builtin("mollified_indicator", 0.0, 1.0, 0.05)

SMOOTH = (GAUSS, C2, MOLL)


def scalar_f(tf, x):
    return float(tf.f(np.array([x]))[0])


# ---------------------------------------------------------------------------
# built-ins and Fourier transforms
# ---------------------------------------------------------------------------

def test_builtin_names_catalog():
    names = testfns.builtin_names()
    for n in ("gaussian", "c2_bump", "indicator", "tent", "mollified_indicator"):
        assert n in names


def test_builtin_parameter_errors():
    with pytest.raises(DomainError):
        builtin("indicator", 1.0, -1.0)  # a >= b
    with pytest.raises(DomainError):
        builtin("gaussian", 0.0, 0.0)  # s <= 0
    with pytest.raises(DomainError):
        builtin("mollified_indicator", 0.0, 1.0, 0.0)  # eps <= 0
    with pytest.raises(DomainError):
        builtin("nonsense", 1.0)


def test_gaussian_fhat_closed_form():
    # fhat(xi) = sqrt(2/pi) exp(-xi^2/2) under the 1/pi transform convention
    assert complex(GAUSS.fhat(np.array([0.0]))[0]).real == pytest.approx(
        0.7978846, abs=1e-6
    )
    xi = np.array([0.5, 1.0, 3.0])
    want = math.sqrt(2.0 / math.pi) * np.exp(-(xi**2) / 2.0)
    assert np.allclose(np.real(GAUSS.fhat(xi)), want, atol=1e-12)


def test_indicator_fhat_closed_form():
    # indicator(-1,1): fhat(xi) = 2 sin(xi) / (pi xi), fhat(0) = 2/pi
    assert complex(IND11.fhat(np.array([0.0]))[0]).real == pytest.approx(
        2.0 / math.pi, abs=1e-12
    )
    for xi in (0.7, 2.0, 11.0):
        want = 2.0 * math.sin(xi) / (math.pi * xi)
        assert complex(IND11.fhat(np.array([xi]))[0]).real == pytest.approx(
            want, abs=1e-12
        )


def test_fhat_at_zero_is_mass():
    for tf in (GAUSS, IND01, TENT, C2, MOLL):
        got = complex(tf.fhat(np.array([0.0]))[0])
        assert got.real == pytest.approx(tf.integral / math.pi, abs=1e-8)
        assert abs(got.imag) <= 1e-10


def test_closed_form_matches_quadrature_grid():
    # 50-point grid cross-check of every closed-form transform
    grid = np.linspace(-12.0, 12.0, 50)
    for tf in (GAUSS, IND01, TENT, MOLL):
        for xi in grid:
            closed = complex(tf.fhat(np.array([xi]))[0])
            assert abs(closed - tf.fourier_quadrature(float(xi))) <= 1e-8


def test_fourier_linearity():
    # the transform of a*f + b*g is a*fhat + b*ghat
    a, b = 2.0, -3.0

    def f(x):
        return a * GAUSS.f(x) + b * TENT.f(x)

    combo = TF(
        name="combo", f=f, fprime=None, fsecond=None, fhat=None,
        fhat_closed=False, integral=a * GAUSS.integral + b * TENT.integral,
        smoothness="kink", compact_radius=None, gaussian_scale=1.0,
        breakpoints=(0.0, -1.0, 1.0),
    )
    for xi in (0.0, 0.5, 2.0, 7.0):
        want = a * complex(GAUSS.fhat(np.array([xi]))[0]) + b * complex(
            TENT.fhat(np.array([xi]))[0]
        )
        assert abs(combo.fourier_quadrature(xi) - want) <= 1e-8


def test_fourier_scaling():
    # f(x/c) transforms to c * fhat(c xi); dilating gaussian(0,1) by c gives
    # gaussian(0,c)
    c = 2.5
    wide = builtin("gaussian", 0.0, c)
    for xi in (0.0, 0.3, 1.0, 2.0):
        got = complex(wide.fhat(np.array([xi]))[0])
        want = c * complex(GAUSS.fhat(np.array([c * xi]))[0])
        assert abs(got - want) <= 1e-8


def test_plancherel_pin_gaussian():
    # integral of |fhat|^2 = integral (2/pi) e^{-xi^2} = (2/pi) sqrt(pi)
    val = quad(lambda xi: abs(complex(GAUSS.fhat(np.array([xi]))[0])) ** 2,
               -30.0, 30.0, limit=200)[0]
    assert val == pytest.approx(2.0 * math.sqrt(math.pi) / math.pi, abs=1e-6)


def test_radius_controls_truncation():
    for tf in (GAUSS, IND01, TENT, C2, MOLL):
        r = tf.radius(1e-10)
        for x in (r + 1e-6, 2.0 * r, 4.0 * r, 8.0 * r):
            assert abs(scalar_f(tf, x)) <= 1e-10
            assert abs(scalar_f(tf, -x)) <= 1e-10


# ---------------------------------------------------------------------------
# bump and cutoff splines
# ---------------------------------------------------------------------------

def test_bump_mass_and_support():
    mass = quad(lambda x: float(testfns.bump(np.array([x]))[0]), -1.0, 1.0)[0]
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert float(testfns.bump(np.array([1.0]))[0]) == 0.0
    assert float(testfns.bump(np.array([-1.2]))[0]) == 0.0


def test_bump_cdf_matches_quadrature():
    for z in (-0.8, -0.3, 0.0, 0.4, 0.9):
        want = quad(lambda x: float(testfns.bump(np.array([x]))[0]), -1.0, z)[0]
        assert testfns.bump_cdf(z) == pytest.approx(want, abs=1e-10)


def test_bump_derivatives_consistent():
    h = 1e-5
    for x in (-0.7, -0.2, 0.3, 0.8):
        num = (scalar_f_b(x + h) - scalar_f_b(x - h)) / (2 * h)
        assert float(testfns.bump_prime(np.array([x]))[0]) == pytest.approx(
            num, abs=1e-6
        )


def scalar_f_b(x):
    return float(testfns.bump(np.array([x]))[0])


def test_chi_cutoff_shape():
    y = np.array([0.0, 0.25, 0.5, 1.0, 2.0])
    c = chi(y)
    assert c[0] == 1.0 and c[1] == 1.0 and c[2] == 1.0
    assert c[3] == 0.0 and c[4] == 0.0
    # C^1 join: derivative vanishes at both ends of the ramp
    assert float(chi_prime(np.array([0.5]))[0]) == pytest.approx(0.0, abs=1e-12)
    assert float(chi_prime(np.array([1.0]))[0]) == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# H^{1/2} forms and sigma_t^2
# ---------------------------------------------------------------------------

def test_h_half_gaussian_closed_form():
    assert testfns.h_half_inner(GAUSS, GAUSS) == pytest.approx(
        2.0 / math.pi, abs=1e-6
    )


def test_h_half_symmetry():
    ab = testfns.h_half_inner(GAUSS, TENT)
    ba = testfns.h_half_inner(TENT, GAUSS)
    assert ab == pytest.approx(ba, abs=1e-10)


def test_h_half_indicator_divergent():
    assert math.isinf(testfns.h_half_inner(IND01, IND01))


def test_h_half_diagonal_nonnegative():
    for tf in (GAUSS, TENT, C2, MOLL):
        assert testfns.h_half_inner(tf, tf) >= 0.0


def test_logkernel_matches_fourier_form_smooth():
    for tf in SMOOTH:
        a = testfns.h_half_inner(tf, tf)
        b = testfns.h_half_logkernel(tf, tf)
        assert abs(a - b) <= 1e-5 * abs(a)


def test_logkernel_tent_gaussian_cross():
    a = testfns.h_half_inner(TENT, GAUSS)
    b = testfns.h_half_logkernel(TENT, GAUSS)
    assert abs(a - b) <= 1e-4


def test_logkernel_zero_derivative():
    flat = TF(
        name="flat", f=lambda x: np.zeros_like(np.asarray(x, float)),
        fprime=lambda x: np.zeros_like(np.asarray(x, float)),
        fsecond=lambda x: np.zeros_like(np.asarray(x, float)),
        fhat=lambda xi: np.zeros_like(np.asarray(xi, float)) + 0j,
        fhat_closed=True, integral=0.0, smoothness="smooth", compact_radius=5.0,
    )
    assert testfns.h_half_logkernel(flat, flat) == pytest.approx(0.0, abs=1e-12)


def test_sigma_t_sq_examples():
    assert testfns.sigma_t_sq(GAUSS, 0.0) == 0.0
    assert testfns.sigma_t_sq(GAUSS, 10.0) == pytest.approx(
        2.0 / math.pi, abs=1e-6
    )


def test_sigma_t_sq_monotone_in_lambda():
    vals = [testfns.sigma_t_sq(GAUSS, lam) for lam in (0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sigma_t_sq_indicator_log_growth():
    # |fhat|^2 ~ (2/pi^2)(1 - cos 2xi)/xi^2, so the truncated variance grows
    # like (4/pi^2) log(lambda) + c
    lams = (10.0, 100.0, 1000.0)
    vals = [testfns.sigma_t_sq(IND01, lam) for lam in lams]
    slope = 4.0 / math.pi**2
    c = vals[1] - slope * math.log(lams[1])
    for lam, v in zip(lams, vals):
        fit = slope * math.log(lam) + c
        assert abs(v - fit) <= 0.02 * abs(v)


# ---------------------------------------------------------------------------
# norms and total variation
# ---------------------------------------------------------------------------

def test_norm_bundle_gaussian():
    nb = testfns.norm_bundle(GAUSS)
    assert nb.l1_f == pytest.approx(math.sqrt(2.0 * math.pi), abs=1e-8)
    assert nb.l1_f1 == pytest.approx(2.0, abs=1e-8)  # 2 max f
    for v in (nb.l1_f, nb.l1_f1, nb.l1_f2, nb.xlog_f, nb.xlog_f1, nb.xlog_f2):
        assert math.isfinite(v) and v >= 0.0


def test_norm_bundle_error_factor_decreases():
    nb = testfns.norm_bundle(GAUSS)
    assert nb.error_factor(1e6) <= nb.error_factor(1e3)


def test_weighted_tv_indicator_jumps():
    # two unit jumps at 0 and 1; the weight 1 + |u log|u|| equals 1 at both
    assert testfns.weighted_tv(IND01, which="f") == pytest.approx(2.0, abs=1e-7)


def test_weighted_tv_gaussian_oracle():
    # for smooth f the weighted TV of f is the integral of weight * |f'|
    want = quad(
        lambda x: (1.0 + abs(x * math.log(abs(x)))) * abs(
            float(GAUSS.fprime(np.array([x]))[0])
        ),
        -9.0, 9.0, points=[-1.0, 0.0, 1.0], limit=400,
    )[0]
    assert testfns.weighted_tv(GAUSS, which="f") == pytest.approx(want, abs=1e-4)


def test_weighted_tv_monotone_rise_fall():
    # unweighted TV of a nonnegative unimodal function vanishing at infinity
    # is twice its maximum
    assert testfns.weighted_tv(GAUSS, which="f", weighted=False) == pytest.approx(
        2.0, abs=1e-9
    )
    assert testfns.weighted_tv(TENT, which="f", weighted=False) == pytest.approx(
        2.0, abs=1e-9
    )


def test_weighted_tv_tent_derivative():
    # f' of the unit tent is a two-step function: TV = |2| + |-4| + |2| = 8/(b-a)
    assert testfns.weighted_tv(TENT, which="f'", weighted=False) == pytest.approx(
        4.0, abs=1e-9
    )


def test_weighted_tv_jump_function_derivative_unbounded():
    with pytest.raises(UnboundedVariationError):
        testfns.weighted_tv(IND01, which="f'")


# ---------------------------------------------------------------------------
# mollification
# ---------------------------------------------------------------------------

def test_mollify_preserves_mass():
    fm = testfns.mollify(GAUSS, 0.1)
    assert fm.integral == pytest.approx(GAUSS.integral, abs=1e-8)
    mass = quad(lambda x: float(fm.f(np.array([x]))[0]), -10.0, 10.0, limit=400)[0]
    assert mass == pytest.approx(GAUSS.integral, abs=1e-6)


def test_mollify_sup_difference_halves():
    grid = np.linspace(-4.0, 4.0, 161)

    def supdiff(eps):
        fm = testfns.mollify(GAUSS, eps)
        return float(np.max(np.abs(fm.f(grid) - GAUSS.f(grid))))

    d1, d2 = supdiff(0.1), supdiff(0.05)
    # Lipschitz second derivative gives an O(eps^2) rate; halving eps should
    # cut the sup difference by at least half
    assert d2 <= 0.55 * d1


def test_mollify_fhat_product_rule():
    fm = testfns.mollify(GAUSS, 0.1)
    for xi in (0.0, 0.7, 2.0, 5.0):
        closed = complex(fm.fhat(np.array([xi]))[0])
        assert abs(closed - fm.fourier_quadrature(xi)) <= 1e-8


def test_mollified_indicator_second_derivative_bound():
    # || f_eps'' ||_1 <= 2 TV(f) / eps for the mollified unit indicator
    eps = 0.05
    fm = builtin("mollified_indicator", 0.0, 1.0, eps)
    cuts = [0.0 - eps, 0.0, 0.0 + eps, 1.0 - eps, 1.0, 1.0 + eps]
    l1 = quad(lambda x: abs(float(fm.fsecond(np.array([x]))[0])),
              -0.5, 1.5, points=cuts, limit=400)[0]
    assert l1 <= 2.0 * 2.0 / eps


def test_mollify_matches_closed_form_mollified_indicator():
    fm = testfns.mollify(IND01, 0.05)
    grid = np.linspace(-0.5, 1.5, 101)
    assert np.max(np.abs(fm.f(grid) - MOLL.f(grid))) <= 1e-10


def test_mollify_rejects_bad_epsilon():
    with pytest.raises(DomainError):
        testfns.mollify(GAUSS, 0.0)


# ---------------------------------------------------------------------------
# hypothesis checking
# ---------------------------------------------------------------------------

def test_hypotheses_gaussian():
    rep = testfns.check_hypotheses(GAUSS)
    assert rep.decay_ok and rep.bv_f1_ok and rep.bv_f_ok and rep.fourier_decay_ok
    assert rep.h_half_finite
    assert rep.smooth_clt_admissible and rep.normalized_clt_admissible


def test_hypotheses_indicator():
    rep = testfns.check_hypotheses(IND01)
    assert rep.normalized_clt_admissible
    assert not rep.h_half_finite
    assert not rep.smooth_clt_admissible


def test_hypotheses_tent():
    rep = testfns.check_hypotheses(TENT)
    assert rep.smooth_clt_admissible


def test_hypotheses_details_populated():
    rep = testfns.check_hypotheses(GAUSS)
    assert isinstance(rep.details, dict) and rep.details


# ---------------------------------------------------------------------------
# resolvent-kernel reconstruction and the exponential-kernel identity
# ---------------------------------------------------------------------------

def test_reconstruct_gaussian_center():
    assert testfns.hs_reconstruct(GAUSS, 0.0, 1e-6) == pytest.approx(
        1.0, abs=1e-6
    )


def test_reconstruct_gaussian_points():
    for q in (-1.3, 0.4, 2.0):
        want = scalar_f(GAUSS, q)
        assert testfns.hs_reconstruct(GAUSS, q, 1e-6) == pytest.approx(
            want, abs=1e-6
        )


def test_reconstruct_zero_function():
    zero = TF(
        name="zero", f=lambda x: np.zeros_like(np.asarray(x, float)),
        fprime=lambda x: np.zeros_like(np.asarray(x, float)),
        fsecond=lambda x: np.zeros_like(np.asarray(x, float)),
        fhat=lambda xi: np.zeros_like(np.asarray(xi, float)) + 0j,
        fhat_closed=True, integral=0.0, smoothness="smooth", compact_radius=3.0,
    )
    assert testfns.hs_reconstruct(zero, 0.7) == pytest.approx(0.0, abs=1e-12)


def test_reconstruct_shift_equivariance():
    shifted = builtin("gaussian", 0.8, 1.0)
    for q in (0.0, 1.1):
        a = testfns.hs_reconstruct(shifted, q + 0.8, 1e-6)
        b = testfns.hs_reconstruct(GAUSS, q, 1e-6)
        assert abs(a - b) <= 2e-6


def test_reconstruct_tent_kinks():
    # distributional second derivative: delta masses at the kinks
    for q in (0.0, 0.5, -0.3):
        want = scalar_f(TENT, q)
        assert testfns.hs_reconstruct(TENT, q, 1e-6) == pytest.approx(
            want, abs=1e-5
        )


def test_reconstruct_rejects_jump_function():
    with pytest.raises(DomainError):
        testfns.hs_reconstruct(IND01, 0.5)


def _exp_kernel_lhs(tf, delta):
    """(1/pi) double integral of (y f'' chi + (f - i y f') chi') e^{-i d x - d y}."""
    r = tf.radius(1e-13) + 1.0

    def xint(hfn):
        re = quad(lambda x: float(hfn(np.array([x]))[0]) * math.cos(delta * x),
                  -r, r, points=sorted(tf.breakpoints) or None, limit=400)[0]
        im = quad(lambda x: -float(hfn(np.array([x]))[0]) * math.sin(delta * x),
                  -r, r, points=sorted(tf.breakpoints) or None, limit=400)[0]
        return complex(re, im)

    y1 = quad(lambda y: y * float(chi(np.array([y]))[0]) * math.exp(-delta * y),
              0.0, 1.0, points=[0.5], limit=200)[0]
    yc = quad(lambda y: float(chi_prime(np.array([y]))[0]) * math.exp(-delta * y),
              0.5, 1.0, limit=200)[0]
    y1c = quad(lambda y: y * float(chi_prime(np.array([y]))[0]) * math.exp(-delta * y),
               0.5, 1.0, limit=200)[0]
    total = y1 * xint(tf.fsecond) + yc * xint(tf.f) - 1j * y1c * xint(tf.fprime)
    return total / math.pi


def test_exponential_kernel_identity():
    # the double integral with the e^{-i delta x - delta y} kernel collapses,
    # after integrating by parts in y, to minus the Fourier transform
    for tf in SMOOTH:
        for delta in (0.5, 1.0, 2.0):
            lhs = _exp_kernel_lhs(tf, delta)
            rhs = -complex(tf.fhat(np.array([delta]))[0])
            assert abs(lhs - rhs) <= 1e-5
