#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math

import numpy as np

from wedgeshock.geometry import SONIC
from wedgeshock.geometry import SHOCK
from wedgeshock.geometry import WEDGE
from wedgeshock.geometry import SYMMETRY
from wedgeshock.geometry import INTERIOR
from wedgeshock.geometry import REGION_INNER
from wedgeshock.geometry import REGION_OVERLAP
from wedgeshock.geometry import REGION_BLEND
from wedgeshock.geometry import REGION_OUTER
from wedgeshock.geometry import SonicFrame
from wedgeshock.geometry import ScalarField
from wedgeshock.geometry import ReflectionDomain
from wedgeshock.geometry import FreeBoundaryCurve
from wedgeshock.geometry import side_tags
from wedgeshock.geometry import region_tags
from wedgeshock.geometry import build_domain
from wedgeshock.geometry import weighted_norm
from wedgeshock.geometry import parabolic_norm
from wedgeshock.geometry import discrete_norms
from wedgeshock.geometry import polar_derivatives
from wedgeshock.geometry import extract_free_boundary
from wedgeshock.geometry import sonic_reference_shock
from wedgeshock.errors import MeshFold
from wedgeshock.errors import NonMonotone
from wedgeshock.errors import ArcsineDomain
from wedgeshock.errors import OriginSingularity
from wedgeshock.errors import InvariantViolated
from tests.helpers import state_two
from tests.helpers import straight_domain


def test_sonic_frame_inverse():
    ("SonicFrame.inverse() should undo SonicFrame.forward()")

    # Given a frame and a point inside the sonic circle
    frame = SonicFrame(1.8, 0.5 * math.pi - 0.02)

    # When I go to (x, y) and back
    x, y = frame.forward(-0.7, 0.9)
    xi, eta = frame.inverse(x, y)

    # Then I get the point back
    xi.should.equal(-0.7, epsilon=1e-14)
    eta.should.equal(0.9, epsilon=1e-14)

    # And x is the distance to the sonic circle
    x.should.equal(1.8 - math.hypot(-0.7, 0.9), epsilon=1e-14)


def test_sonic_frame_origin():
    ("SonicFrame.forward() should raise OriginSingularity at r = 0")

    frame = SonicFrame(1.0, 0.5 * math.pi)
    frame.forward.when.called_with(np.array([0.3, 0.0]), np.array([0.1, 0.0])).should.throw(
        OriginSingularity
    )


def test_sonic_reference_shock_at_normal_reflection():
    ("sonic_reference_shock() should pass through P1 at x = 0")

    # Given normal reflection and a perturbed state (2)
    for sigma in (0.0, 0.01):
        state2 = state_two(sigma)

        # When I evaluate the shock on the sonic arc
        y = sonic_reference_shock(state2, 0.0)

        # Then it is the angle of P1
        y.should.equal(state2.y1, epsilon=1e-12)


def test_sonic_reference_shock_out_of_reach():
    ("sonic_reference_shock() should raise ArcsineDomain once the shock misses the circle of radius c2 - x")

    state2 = state_two(0.0)
    sonic_reference_shock.when.called_with(state2, 0.99 * state2.c2).should.throw(ArcsineDomain)


def test_free_boundary_curve_rejects_bad_samples():
    ("FreeBoundaryCurve() should require ascending eta and at least 3 samples")

    FreeBoundaryCurve.when.called_with([0.0, 2.0, 1.0], [0.0, 0.0, 0.0], 0.0).should.throw(
        InvariantViolated
    )
    FreeBoundaryCurve.when.called_with([0.0, 1.0], [0.0, 0.0], 0.0).should.throw(InvariantViolated)


def test_free_boundary_curve_linear_data():
    ("FreeBoundaryCurve should reproduce a straight line whose slope matches the end slope")

    # Given samples of xi = 0.1 eta - 1
    eta = np.linspace(0.0, 1.0, 9)
    curve = FreeBoundaryCurve(eta, 0.1 * eta - 1.0, 0.1)

    # When I evaluate between samples
    probe = np.array([0.03, 0.41, 0.97])

    # Then the line comes back with its slope
    np.testing.assert_allclose(curve(probe), 0.1 * probe - 1.0, atol=1e-14)
    np.testing.assert_allclose(curve.derivative(probe), 0.1, atol=1e-12)
    curve.end_slope_mismatch().should.equal(0.0, epsilon=1e-12)


def test_free_boundary_curve_straight():
    ("FreeBoundaryCurve.straight() should lie on the reflected shock and end at P1")

    # Given state (2) at sigma=0.01
    state2 = state_two(0.01)

    # When I build the reference curve
    curve = FreeBoundaryCurve.straight(state2, 12)

    # Then it spans the symmetry line to P1
    len(curve).should.equal(12)
    curve.eta[0].should.equal(-state2.v2, epsilon=1e-15)
    curve.eta[-1].should.equal(state2.eta1, epsilon=1e-15)
    curve.xi[-1].should.equal(state2.xi1, epsilon=1e-15)

    # And it never falls below the straight shock
    curve.deficit(state2).should.equal(0.0, epsilon=1e-12)
    curve.end_slope_mismatch().should.equal(0.0, epsilon=1e-10)


def test_free_boundary_curve_shifted_and_relaxed():
    ("FreeBoundaryCurve.shifted() and relaxed() should move the samples")

    # Given a straight curve
    state2 = state_two(0.01)
    curve = FreeBoundaryCurve.straight(state2, 10)

    # When I shift it and relax halfway back
    moved = curve.shifted(0.02)
    halfway = moved.relaxed(curve, 0.5)

    # Then the distances follow
    moved.sup_distance(curve).should.equal(0.02, epsilon=1e-14)
    halfway.sup_distance(curve).should.equal(0.01, epsilon=1e-14)
    moved.deficit(state2).should.equal(-0.02, epsilon=1e-12)


def test_free_boundary_curve_to_dict():
    ("FreeBoundaryCurve.from_dict() should rebuild the same curve")

    state2 = state_two(0.01)
    curve = FreeBoundaryCurve.straight(state2, 10)
    copy = FreeBoundaryCurve.from_dict(curve.to_dict())

    copy.sup_distance(curve).should.equal(0.0)
    copy.end_slope.should.equal(curve.end_slope)


def test_side_tags_corners():
    ("side_tags() should give the sonic side both of its corners and the symmetry side the other two")

    tags = side_tags((5, 4))

    tags[0, 0].should.equal(SONIC)
    tags[0, -1].should.equal(SONIC)
    tags[-1, 0].should.equal(SYMMETRY)
    tags[-1, -1].should.equal(SYMMETRY)
    tags[2, 0].should.equal(WEDGE)
    tags[2, -1].should.equal(SHOCK)
    tags[2, 1].should.equal(INTERIOR)
    (tags != INTERIOR).sum().should.equal(2 * 5 + 2 * 4 - 4)


def test_region_tags():
    ("region_tags() should split at eps, 2 eps and 4 eps")

    region = region_tags(np.array([0.0, 0.1, 0.15, 0.2, 0.3, 0.45, 0.6]), 0.1)

    region.tolist().should.equal([
        REGION_INNER, REGION_INNER, REGION_OVERLAP, REGION_BLEND, REGION_BLEND,
        REGION_OUTER, REGION_OUTER,
    ])


def test_build_domain_area_at_normal_reflection():
    ("build_domain() at sigma=0 should cover the region between the shock, the wedge and the sonic arc")

    # Given the straight-shock grid of normal reflection
    domain, _ = straight_domain(0.0, (64, 64))
    state2 = domain.state2
    xibar = state2.xitilde
    c = state2.c2

    # When I compare its area with the closed form
    expected = abs(xibar) * state2.eta1 / 2 + 0.5 * c ** 2 * (0.5 * math.pi - math.asin(state2.eta1 / c))

    # Then they agree up to the chords of the arc
    (abs(domain.area - expected) / expected).should.be.lower_than(1e-3)

    # And the corners are where they belong
    domain.xi[0, -1].should.equal(state2.xi1, epsilon=1e-14)
    domain.eta[-1, 0].should.equal(0.0, epsilon=1e-14)
    domain.xi[-1, -1].should.equal(xibar, epsilon=1e-14)


def test_build_domain_rejects_curve_below_the_shock():
    ("build_domain() should raise MeshFold when the free boundary dips below the reflected shock")

    # Given a free boundary shifted below the straight shock
    domain, config = straight_domain(0.01, (16, 16))
    below = domain.fb.shifted(-1e-3)

    # Then the domain cannot be built
    build_domain.when.called_with(domain.state2, below, (16, 16), config.epsilon).should.throw(MeshFold)


def test_build_domain_rejects_coarse_resolution():
    ("build_domain() should require at least 8 nodes per direction")

    domain, config = straight_domain(0.0, (16, 16))
    build_domain.when.called_with(domain.state2, domain.fb, (4, 16), config.epsilon).should.throw(
        InvariantViolated
    )


def test_domain_validate_flags_a_fold():
    ("ReflectionDomain.validate() should raise MeshFold on a folded grid")

    # Given a rectangle with one node pushed across its neighbour
    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.0, 1.0), (5, 5))
    xi = domain.xi.copy()
    xi[2, 2] = 0.9

    # Then it does not validate
    ReflectionDomain(xi, domain.eta).validate.when.called_with().should.throw(MeshFold)


def test_scalar_field_derivatives_of_a_quadratic():
    ("ScalarField.gradient() and hessian() should be exact for quadratics on a rectangle")

    # Given psi = xi^2 + 3 xi eta - eta^2
    domain = ReflectionDomain.rectangle((-1.0, 0.5), (0.2, 1.1), (9, 7))
    field = ScalarField.from_function(domain, lambda xi, eta: xi ** 2 + 3 * xi * eta - eta ** 2)

    # When I differentiate
    gx, gy = field.gradient()
    hxx, hxy, hyy = field.hessian()

    # Then the derivatives are exact
    np.testing.assert_allclose(gx, 2 * domain.xi + 3 * domain.eta, atol=1e-10)
    np.testing.assert_allclose(gy, 3 * domain.xi - 2 * domain.eta, atol=1e-10)
    np.testing.assert_allclose(hxx, 2.0, atol=1e-8)
    np.testing.assert_allclose(hxy, 3.0, atol=1e-8)
    np.testing.assert_allclose(hyy, -2.0, atol=1e-8)


def test_scalar_field_gradient_on_the_curved_grid():
    ("ScalarField.gradient() of the coordinate xi should be (1, 0) on the boundary-fitted grid")

    domain, _ = straight_domain(0.01, (16, 16))
    field = ScalarField(domain, domain.xi)

    gx, gy = field.gradient()

    np.testing.assert_allclose(gx, 1.0, atol=1e-10)
    np.testing.assert_allclose(gy, 0.0, atol=1e-10)


def test_scalar_field_sample_and_regrid():
    ("ScalarField.sample() should reproduce a linear function inside the grid")

    # Given a linear field
    domain, _ = straight_domain(0.0, (12, 12))
    field = ScalarField.from_function(domain, lambda xi, eta: 2 * xi - eta + 1)

    # When I sample at cell centres
    xi = 0.25 * (domain.xi[3, 4] + domain.xi[4, 4] + domain.xi[3, 5] + domain.xi[4, 5])
    eta = 0.25 * (domain.eta[3, 4] + domain.eta[4, 4] + domain.eta[3, 5] + domain.eta[4, 5])
    value = field.sample(np.array([xi]), np.array([eta]))

    # Then linear interpolation is exact
    value[0].should.equal(2 * xi - eta + 1, epsilon=1e-12)

    # And regridding onto the same grid is the identity
    field.regrid(domain).should.be(field)


def test_scalar_field_shape():
    ("ScalarField() should reject values not shaped like the grid")

    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.0, 1.0), (5, 5))
    ScalarField.when.called_with(domain, np.zeros((4, 5))).should.throw(InvariantViolated)


def test_extract_free_boundary_of_zero():
    ("extract_free_boundary() of psi = 0 should give back the straight reflected shock")

    # Given the straight-shock grid at sigma=0.01
    domain, _ = straight_domain(0.01, (16, 16))
    state2 = domain.state2

    # When I extract the curve of psi = 0
    curve = extract_free_boundary(domain, ScalarField.zeros(domain), state2)

    # Then it is the reference shock
    np.testing.assert_allclose(curve.xi, state2.reference_shock(curve.eta), atol=1e-9)
    curve.xi[-1].should.equal(state2.xi1)


def test_extract_free_boundary_below_the_shock():
    ("extract_free_boundary() should raise NonMonotone when psi is negative on the shock")

    domain, _ = straight_domain(0.01, (16, 16))
    psi = ScalarField(domain, np.full(domain.shape, -1e-3))

    extract_free_boundary.when.called_with(domain, psi, domain.state2).should.throw(NonMonotone)


def test_polar_derivatives_of_the_radius():
    ("polar_derivatives() of psi = r should be psi_x = -1 and zero otherwise")

    # Given the cartesian derivatives of r at a few points
    xi = np.array([-0.4, -1.1, 0.2])
    eta = np.array([0.8, 0.3, 1.4])
    r = np.hypot(xi, eta)
    gradient = (xi / r, eta / r)
    hessian = (eta ** 2 / r ** 3, -xi * eta / r ** 3, xi ** 2 / r ** 3)

    # When I convert them
    px, py, pxx, pxy, pyy = polar_derivatives(xi, eta, gradient, hessian)

    # Then only the radial derivative survives
    np.testing.assert_allclose(px, -1.0, atol=1e-14)
    for value in (py, pxx, pxy, pyy):
        np.testing.assert_allclose(value, 0.0, atol=1e-14)


def test_polar_derivatives_at_the_origin():
    ("polar_derivatives() should raise OriginSingularity at r = 0")

    zeros = np.zeros(1)
    polar_derivatives.when.called_with(
        zeros, zeros, (zeros, zeros), (zeros, zeros, zeros)
    ).should.throw(OriginSingularity)


def test_parabolic_norm_of_x_squared():
    ("parabolic_norm() of psi = x^2 should be 1 + 2 + 2")

    x = np.linspace(0.01, 0.2, 11)
    y = np.linspace(0.0, 0.3, 11)
    samples = {
        "x": x, "y": y, "d00": x ** 2, "d10": 2 * x, "d01": 0 * x,
        "d20": 2 + 0 * x, "d11": 0 * x, "d02": 0 * x,
    }

    parabolic_norm(samples).should.equal(5.0, epsilon=1e-12)


def test_weighted_norm_of_a_constant():
    ("weighted_norm() of psi = 1 should be 1")

    xi = np.linspace(-1.0, 0.0, 7)
    zeros = 0 * xi
    samples = {
        "xi": xi, "eta": 1 + zeros, "distance": 0.5 + zeros,
        "d00": 1 + zeros, "d10": zeros, "d01": zeros,
        "d20": zeros, "d11": zeros, "d02": zeros,
    }

    weighted_norm(samples).should.equal(1.0, epsilon=1e-14)


def test_discrete_norms_of_zero():
    ("discrete_norms() of the zero field should vanish")

    domain, _ = straight_domain(0.01, (16, 16))

    parabolic, weighted = discrete_norms(domain, ScalarField.zeros(domain))

    parabolic.should.equal(0.0)
    weighted.should.equal(0.0)
