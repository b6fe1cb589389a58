"""Tests for the quadrature capacity routes against the closed forms."""

import math

import numpy as np
import pytest

from metastable import (
    BoxSpec,
    FlatStable,
    FlatUnstable,
    MinimumSpec,
    PolynomialPotential,
    Quadratic,
    SaddleSpec,
    StationaryPoint,
    capacity_1d_exact,
    Codim2,
    default_box,
    dirichlet_upper_bound,
    ek_classical,
    ek_codim2,
    ek_flat_stable,
    ek_flat_unstable,
    fiber_lower_bound,
    reduced_capacity,
    verification_report,
)

UNIT_MIN = MinimumSpec(value=0.0, hessian_det=1.0)


def wide_box(eps, *, delta2=None, deltaj=()):
    return BoxSpec(delta1=8.0 * math.sqrt(eps), eps=eps, delta2=delta2, deltaj=deltaj)


# ---------------------------------------------------------------------------
# reduced integral against the closed forms (independent routes)


def test_reduced_capacity_gaussian_matches_classical():
    eps, lam1, lam2 = 0.05, 1.0, 0.5
    box = wide_box(eps, delta2=8.0 * math.sqrt(eps / lam2))
    est = reduced_capacity(
        lambda t: 0.5 * lam1 * t * t,
        lambda t: 0.5 * lam2 * t * t,
        (2.0,),
        eps,
        box,
    )
    closed = ek_classical(
        UNIT_MIN, SaddleSpec(0.0, Quadratic(), (lam2, 2.0), lam1), eps
    ).capacity_prefactor
    assert est.value == pytest.approx(closed, rel=1e-8)
    assert est.method == "reduced_integral"


def test_reduced_capacity_quartic_matches_flat_stable():
    eps, c4 = 0.05, 0.125
    box = wide_box(eps, delta2=(30.0 * eps / c4) ** 0.25)
    est = reduced_capacity(
        lambda t: 0.5 * t * t, lambda t: c4 * t**4, (), eps, box
    )
    closed = ek_flat_stable(
        UNIT_MIN, SaddleSpec(0.0, FlatStable(2, c4), (), 1.0), eps
    ).capacity_prefactor
    assert est.value == pytest.approx(closed, rel=1e-8)


def test_reduced_capacity_disc_matches_codim2():
    eps, k = 0.05, 0.125
    box = wide_box(eps, delta2=(30.0 * eps / k) ** 0.25)
    est = reduced_capacity(
        lambda t: 0.5 * t * t,
        lambda y2, y3: k * (y2 * y2 + y3 * y3) ** 2,
        (),
        eps,
        box,
        q=3,
    )
    closed = ek_codim2(
        UNIT_MIN, SaddleSpec(0.0, Codim2(angular=k, p=2), (), 1.0), eps
    ).capacity_prefactor
    assert est.value == pytest.approx(closed, rel=1e-8)


def test_reduced_capacity_eps_scaling_of_gaussian_product():
    # pure Gaussian: I2/I1 is eps-free, each quadratic direction adds sqrt(eps)
    def run(eps):
        box = wide_box(eps, delta2=8.0 * math.sqrt(eps))
        return reduced_capacity(
            lambda t: 0.5 * t * t,
            lambda t: 0.5 * t * t,
            (1.0, 1.0),
            eps,
            box,
        ).value

    ratio = run(0.02) / run(0.01)
    assert ratio == pytest.approx(2.0 * 2.0, rel=1e-7)  # eps * eps^{(d-q)/2}, d-q=2


def test_reduced_capacity_validation():
    box = wide_box(0.05, delta2=1.0)
    u = lambda t: 0.5 * t * t
    with pytest.raises(ValueError):
        reduced_capacity(u, u, (), 0.05, box, q=4)
    with pytest.raises(ValueError):
        reduced_capacity(u, u, (-1.0,), 0.05, box)
    with pytest.raises(ValueError):
        reduced_capacity(u, u, (), 0.0, box)
    with pytest.raises(ValueError):
        reduced_capacity(u, u, (), 0.05, wide_box(0.05))  # no delta2


# ---------------------------------------------------------------------------
# one-dimensional exact capacity


def test_capacity_1d_flat_potential_is_eps_over_length():
    est = capacity_1d_exact(lambda t: 0.0, -1.5, 2.5, 0.1)
    assert est.value == pytest.approx(0.1 / 4.0, rel=1e-12)
    assert est.method == "exact_1d"


def test_capacity_1d_matches_flat_unstable_closed_form():
    eps, c = 0.05, 0.25
    est = capacity_1d_exact(lambda t: -c * t**4, -2.0, 2.0, eps)
    closed = ek_flat_unstable(
        UNIT_MIN, SaddleSpec(0.0, FlatUnstable(2, c), ()), eps
    ).capacity
    assert est.value == pytest.approx(closed, rel=1e-8)


def test_capacity_1d_laplace_error_shrinks_with_eps(dw):
    # eps small enough that the interval-truncation error is negligible and the
    # leading ~3 eps/4 quartic Laplace correction dominates
    ratios = []
    for eps in (0.1, 0.05, 0.025):
        est = capacity_1d_exact(lambda t: float(dw.value(np.array([t]))), -1.0, 1.0, eps)
        closed = ek_classical(
            MinimumSpec(value=-0.25, eigenvalues=(2.0,)),
            SaddleSpec(0.0, Quadratic(), (), 1.0),
            eps,
        ).capacity
        ratios.append(abs(est.value / closed - 1.0))
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 0.04


def test_capacity_1d_validation():
    with pytest.raises(ValueError):
        capacity_1d_exact(lambda t: 0.0, 1.0, -1.0, 0.1)
    with pytest.raises(ValueError):
        capacity_1d_exact(lambda t: 0.0, -1.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# Dirichlet / fiber sandwich on real potentials


def quadratic_gate_estimates(model, eps, grid=33):
    pt = StationaryPoint.at(model, np.zeros(model.dim))
    box = default_box(model, pt, eps)
    upper = dirichlet_upper_bound(model, pt, box, grid=grid)
    lower = fiber_lower_bound(model, pt, box, grid=grid)
    return lower, upper


def test_sandwich_orders_and_brackets_quadratic_gate(rotated_quadratic):
    eps = 0.05
    lower, upper = quadratic_gate_estimates(rotated_quadratic, eps)
    closed = eps * math.sqrt(2.0)  # classical capacity of this gate
    assert lower.value <= upper.value * (1.0 + 1e-5)
    assert 0.7 < lower.value / closed <= 1.0
    assert 0.7 < upper.value / closed < 1.1
    assert upper.method == "dirichlet_upper" and lower.method == "fiber_lower"
    for est in (lower, upper):
        assert est.grid_shape is not None and all(s % 2 == 1 for s in est.grid_shape)
        assert est.rel_change is not None and est.rel_change < 1e-5
        assert any("outside-box" in n for n in est.notes)


def test_sandwich_brackets_flat_gate(rotated_flat):
    eps = 0.05
    lower, upper = quadratic_gate_estimates(rotated_flat, eps)
    closed = ek_flat_stable(
        MinimumSpec(value=0.0, hessian_det=1.0),
        SaddleSpec(0.0, FlatStable(2, 0.125), (), 1.0),
        eps,
    ).capacity_prefactor
    assert lower.value <= upper.value * (1.0 + 1e-5)
    assert 0.6 < lower.value / closed <= 1.0
    assert 0.6 < upper.value / closed < 1.1


def test_upper_bound_converges_toward_closed_form(rotated_quadratic):
    ratios = []
    for eps in (0.05, 0.02):
        _, upper = quadratic_gate_estimates(rotated_quadratic, eps)
        ratios.append(abs(upper.value / (eps * math.sqrt(2.0)) - 1.0))
    assert ratios[1] < ratios[0]


def test_one_dimensional_routes_agree(dw):
    eps = 0.05
    pt = StationaryPoint.at(dw, [0.0])
    box = default_box(dw, pt, eps)
    upper = dirichlet_upper_bound(dw, pt, box)
    lower = fiber_lower_bound(dw, pt, box)
    # in d = 1 the trial function is optimal: both routes give the exact value
    assert lower.value == pytest.approx(upper.value, rel=1e-12)
    exact = capacity_1d_exact(
        lambda t: float(dw.value(np.array([t]))), -box.delta1, box.delta1, eps
    )
    assert upper.value == pytest.approx(exact.value, rel=1e-6)


def test_tensor_bounds_reject_dimension_above_three():
    model = PolynomialPotential(
        [((2, 0, 0, 0), -0.5), ((0, 2, 0, 0), 0.5), ((0, 0, 2, 0), 0.5), ((0, 0, 0, 2), 0.5)],
        dim=4,
    )
    pt = StationaryPoint.at(model, np.zeros(4))
    box = BoxSpec(delta1=0.5, eps=0.05, deltaj=(0.5, 0.5, 0.5))
    with pytest.raises(ValueError, match="1 to 3"):
        dirichlet_upper_bound(model, pt, box)


def test_box_condition_warnings_fire(rotated_quadratic):
    pt = StationaryPoint.at(rotated_quadratic, np.zeros(2))
    eps = 0.01
    too_wide = BoxSpec(delta1=3.0, eps=eps, deltaj=(1.5,))
    with pytest.warns(UserWarning, match="unstable-axis"):
        dirichlet_upper_bound(rotated_quadratic, pt, too_wide, grid=17)
    too_low = BoxSpec(delta1=0.2, eps=eps, deltaj=(0.05,))
    with pytest.warns(UserWarning, match="transverse boundary"):
        fiber_lower_bound(rotated_quadratic, pt, too_low, grid=17)


# ---------------------------------------------------------------------------
# default boxes


def test_default_box_quadratic_gate(rotated_quadratic):
    eps = 0.01
    level = 2.0 * eps * abs(math.log(eps))
    pt = StationaryPoint.at(rotated_quadratic, np.zeros(2))
    box = default_box(rotated_quadratic, pt, eps)
    assert box.delta1 == pytest.approx(math.sqrt(2.0 * level))
    assert box.delta2 is None
    assert box.deltaj == pytest.approx((2.0 * math.sqrt(level / 0.5),))


def test_default_box_soft_stable_gate(rotated_flat):
    eps = 0.01
    level = 2.0 * eps * abs(math.log(eps))
    pt = StationaryPoint.at(rotated_flat, np.zeros(2))
    box = default_box(rotated_flat, pt, eps)
    assert box.delta1 == pytest.approx(math.sqrt(2.0 * level))
    # lambda2 = 0: delta2^2 = sqrt(32 C4 L)/(4 C4) with C4 = 1/8
    assert box.delta2 == pytest.approx(2.0 * level**0.25)
    assert box.deltaj == ()


def test_default_box_quartic_unstable_gate():
    model = PolynomialPotential([((4, 0), -0.25), ((0, 2), 0.5)], dim=2)
    eps = 0.01
    level = 2.0 * eps * abs(math.log(eps))
    pt = StationaryPoint.at(model, np.zeros(2))
    box = default_box(model, pt, eps)
    assert box.delta1 == pytest.approx((4.0 * level) ** 0.25)
    assert box.deltaj == pytest.approx((2.0 * math.sqrt(level),))


def test_default_box_codim2_gate(chain3_critical):
    eps = 0.01
    level = 3.0 * eps * abs(math.log(eps))
    pt = StationaryPoint.at(chain3_critical, np.zeros(3))
    box = default_box(chain3_critical, pt, eps)
    assert box.delta1 == pytest.approx(math.sqrt(2.0 * level))
    assert box.delta2 == pytest.approx((2.0 * level / 0.125) ** 0.25)
    assert box.deltaj == ()


def test_default_box_scale_multiplier(rotated_quadratic):
    pt = StationaryPoint.at(rotated_quadratic, np.zeros(2))
    full = default_box(rotated_quadratic, pt, 0.01)
    half = default_box(rotated_quadratic, pt, 0.01, scale=0.5)
    assert half.delta1 == pytest.approx(0.5 * full.delta1)
    assert half.deltaj == pytest.approx(tuple(0.5 * v for v in full.deltaj))


def test_default_box_rejects_wrong_points(rotated_quadratic, rotated_flat):
    minimum = StationaryPoint.at(rotated_quadratic, np.array([math.sqrt(2.0), 0.0]))
    with pytest.raises(ValueError, match="unstable"):
        default_box(rotated_quadratic, minimum, 0.01)
    wrong_sign = PolynomialPotential([((2, 0), -0.5), ((0, 4), -0.25)], dim=2)
    pt = StationaryPoint.at(wrong_sign, np.zeros(2))
    with pytest.raises(ValueError, match="C4"):
        default_box(wrong_sign, pt, 0.01)
    flat3 = PolynomialPotential(
        [((4, 0, 0), 0.25), ((0, 4, 0), 0.25), ((0, 0, 4), 0.25)], dim=3
    )
    pt = StationaryPoint.at(flat3, np.zeros(3))
    with pytest.raises(ValueError, match="two degenerate"):
        default_box(flat3, pt, 0.01)


def test_default_box_advisory_warning_at_moderate_eps(rotated_quadratic):
    pt = StationaryPoint.at(rotated_quadratic, np.zeros(2))
    with pytest.warns(UserWarning, match="normal-form remainders"):
        default_box(rotated_quadratic, pt, 0.3)


# ---------------------------------------------------------------------------
# specs and reports


def test_box_spec_validation():
    with pytest.raises(ValueError):
        BoxSpec(delta1=0.0, eps=0.1)
    with pytest.raises(ValueError):
        BoxSpec(delta1=1.0, eps=0.1, delta2=-1.0)
    with pytest.raises(ValueError):
        BoxSpec(delta1=1.0, eps=0.1, deltaj=(0.5, 0.0))
    with pytest.raises(ValueError):
        BoxSpec(delta1=1.0, eps=0.0)


def test_box_spec_advisory_messages():
    assert BoxSpec(delta1=1.0, eps=0.01).advisory_warnings()
    assert not BoxSpec(delta1=0.1, eps=0.01).advisory_warnings()


def test_verification_report_shape(rotated_quadratic):
    eps = 0.05
    lower, _ = quadratic_gate_estimates(rotated_quadratic, eps)
    doc = verification_report(lower, eps * math.sqrt(2.0))
    assert doc["method"] == "fiber_lower"
    assert doc["ratio"] == pytest.approx(lower.value / (eps * math.sqrt(2.0)))
    assert doc["box"]["delta1"] == pytest.approx(lower.box.delta1)
    assert doc["grid"]["shape"] == list(lower.grid_shape)
