#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.assembly
~~~~~~~~~~~~~~~~~~~

Coefficients of the second-order equation for ``psi = phi - phi2`` and
the boundary-condition rows of the elliptic problem.

The equation is ``A11 psi_xixi + 2 A12 psi_xieta + A22 psi_etaeta = 0``.
Away from the sonic arc the coefficients are the plain quasilinear
ones (:py:func:`coeffs_uniform`); near it the ``psi_x`` nonlinearity
goes through the elliptic cutoff ``zeta1`` (:py:func:`coeffs_sonic`).
:py:func:`coeffs_combined` blends the two with ``zeta2`` and adds the
viscosity ``delta``.
"""
import math
import logging

import numpy as np

from wedgeshock.gas import clamp_radicand
from wedgeshock.errors import ObliquenessLost
from wedgeshock.errors import OriginSingularity
from wedgeshock.geometry import SONIC
from wedgeshock.geometry import SHOCK
from wedgeshock.geometry import WEDGE
from wedgeshock.geometry import SYMMETRY

DIRICHLET = "dirichlet"
NEUMANN = "neumann"
OBLIQUE = "oblique"

OBLIQUENESS_FRACTION = 0.25

logger = logging.getLogger(__name__)


def _band(gamma):
    low = 4.0 / (3.0 * (gamma + 1.0))
    high = 2.0 / (gamma + 1.0)
    return low, high


def zeta1_saturation(gamma):
    """``sup |zeta1| = 5 / (3 (gamma + 1))``"""
    return 5.0 / (3.0 * (gamma + 1.0))


def zeta1(s, gamma):
    """odd, nondecreasing cutoff: identity for ``|s| <= 4/(3(gamma+1))``,
    constant ``5/(3(gamma+1))`` for ``|s| >= 2/(gamma+1)``, and the
    quintic Hermite blend matching value, slope and curvature at both
    band edges in between (concave on ``s >= 0``)
    """
    low, high = _band(gamma)
    s = np.asarray(s, dtype=float)
    magnitude = np.abs(s)
    width = high - low
    t = np.clip((magnitude - low) / width, 0.0, 1.0)
    blended = low + width * (t - t ** 3 + 0.5 * t ** 4)
    value = np.where(magnitude <= low, magnitude, blended)
    result = np.sign(s) * value
    return float(result) if result.ndim == 0 else result


def zeta1_prime(s, gamma):
    low, high = _band(gamma)
    s = np.asarray(s, dtype=float)
    t = np.clip((np.abs(s) - low) / (high - low), 0.0, 1.0)
    result = 1.0 - 3.0 * t ** 2 + 2.0 * t ** 3
    return float(result) if result.ndim == 0 else result


def zeta2(x, epsilon):
    """smooth step from 0 (``x <= 2 eps``) to 1 (``x >= 4 eps``)"""
    t = np.clip((np.asarray(x, dtype=float) - 2.0 * epsilon) / (2.0 * epsilon), 0.0, 1.0)
    result = t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)
    return float(result) if result.ndim == 0 else result


class CoefficientSet(object):
    """per-node symmetric coefficients, viscosity included

    :param cutoff_active: nodes where the cutoff changed ``zeta1(s) != s``
    :param weight: ``zeta2`` per node (1 where only the plain coefficients count)
    """

    def __init__(self, A11, A12, A22, delta=0.0, cutoff_active=None, weight=None):
        self.A11 = np.asarray(A11, dtype=float)
        self.A12 = np.asarray(A12, dtype=float)
        self.A22 = np.asarray(A22, dtype=float)
        self.delta = float(delta)
        shape = self.A11.shape
        self.cutoff_active = (
            np.zeros(shape, dtype=bool) if cutoff_active is None else np.asarray(cutoff_active)
        )
        self.weight = np.ones(shape) if weight is None else np.asarray(weight)

    def __repr__(self):
        return "CoefficientSet(shape={0}, delta={1!r})".format(self.A11.shape, self.delta)

    @classmethod
    def laplace(cls, shape):
        return cls(np.ones(shape), np.zeros(shape), np.ones(shape))

    def eigenvalues(self):
        """``(smallest, largest)`` per node"""
        mean = 0.5 * (self.A11 + self.A22)
        radius = np.hypot(0.5 * (self.A11 - self.A22), self.A12)
        return mean - radius, mean + radius

    def table(self):
        """rows ``(i, j, A11, A12, A22, cutoff_active)`` of a 2-d set"""
        i, j = np.meshgrid(
            np.arange(self.A11.shape[0]), np.arange(self.A11.shape[1]), indexing="ij"
        )
        return np.column_stack([
            i.ravel(), j.ravel(), self.A11.ravel(), self.A12.ravel(),
            self.A22.ravel(), self.cutoff_active.ravel().astype(float),
        ])


def _radicand(state2, phi_value, phi_grad, xi, eta):
    p1, p2 = phi_grad
    return (
        state2.rho2 ** (state2.gas.gamma - 1.0)
        + xi * p1 + eta * p2
        - 0.5 * (p1 ** 2 + p2 ** 2)
        - phi_value
    )


def coeffs_uniform(state2, phi_value, phi_grad, point):
    """``(A11, A12, A22)`` of the quasilinear equation frozen at ``phi``

    :raises VacuumState: when the density radicand is negative
    """
    xi = np.asarray(point[0], dtype=float)
    eta = np.asarray(point[1], dtype=float)
    p1 = np.asarray(phi_grad[0], dtype=float)
    p2 = np.asarray(phi_grad[1], dtype=float)
    radicand = clamp_radicand(_radicand(state2, phi_value, (p1, p2), xi, eta))
    c2 = (state2.gas.gamma - 1.0) * radicand
    u = p1 - xi
    v = p2 - eta
    return c2 - u ** 2, -u * v, c2 - v ** 2


def coeffs_sonic(state2, psi_grad_trial, phi_value, phi_grad, point):
    """``(A11, A12, A22)`` near the sonic arc; the radial derivative of
    the trial function enters only through ``zeta1``

    :raises OriginSingularity: at ``r = 0``
    """
    gamma = state2.gas.gamma
    xi = np.asarray(point[0], dtype=float)
    eta = np.asarray(point[1], dtype=float)
    r = np.hypot(xi, eta)
    if np.any(r == 0.0):
        raise OriginSingularity((0.0, 0.0))

    x = state2.c2 - r
    t1, t2 = psi_grad_trial
    p1 = np.asarray(phi_grad[0], dtype=float)
    p2 = np.asarray(phi_grad[1], dtype=float)
    phi_value = np.asarray(phi_value, dtype=float)

    positive = x > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(positive, (xi * t1 + eta * t2) / (r * x), 0.0)
    xz = np.where(positive, x * zeta1(s, gamma), 0.0)

    base = state2.c2 ** 2 + (gamma - 1.0) * (r * xz - 0.5 * (p1 ** 2 + p2 ** 2) - phi_value)
    rotation = (xi * p2 - eta * p1) / r ** 2
    A11 = base - xi ** 2 - p1 ** 2 + 2.0 * xi * (xi / r * xz - eta * rotation)
    A22 = base - eta ** 2 - p2 ** 2 + 2.0 * eta * (eta / r * xz + xi * rotation)
    A12 = -(xi * eta + p1 * p2) + 2.0 * xi * eta / r * xz + (xi ** 2 - eta ** 2) * rotation
    return A11, A12, A22


def _cutoff_argument(state2, trial, point):
    xi = np.asarray(point[0], dtype=float)
    eta = np.asarray(point[1], dtype=float)
    r = np.hypot(xi, eta)
    x = state2.c2 - r
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where((x > 0) & (r > 0), (xi * trial[0] + eta * trial[1]) / (r * x), 0.0)


def coeffs_combined(state2, trial, phi_value, phi_grad, point, epsilon, delta):
    """``zeta2 A1 + (1 - zeta2) A2 + delta I`` with ``zeta2`` evaluated at
    the distance ``c2 - r`` to the sonic circle

    :returns: :py:class:`CoefficientSet`
    """
    xi, eta, t1, t2, phi, p1, p2 = np.broadcast_arrays(
        *(np.atleast_1d(np.asarray(v, dtype=float)) for v in (
            point[0], point[1], trial[0], trial[1], phi_value, phi_grad[0], phi_grad[1]
        ))
    )
    x = state2.c2 - np.hypot(xi, eta)
    weight = np.atleast_1d(zeta2(x, epsilon))

    A11, A12, A22 = (np.array(v, dtype=float) for v in coeffs_uniform(state2, phi, (p1, p2), (xi, eta)))
    cutoff_active = np.zeros(xi.shape, dtype=bool)
    near = weight < 1.0
    if np.any(near):
        B11, B12, B22 = coeffs_sonic(
            state2, (t1[near], t2[near]), phi[near], (p1[near], p2[near]), (xi[near], eta[near])
        )
        w = weight[near]
        A11[near] = w * A11[near] + (1.0 - w) * B11
        A12[near] = w * A12[near] + (1.0 - w) * B12
        A22[near] = w * A22[near] + (1.0 - w) * B22
        s = _cutoff_argument(state2, (t1[near], t2[near]), (xi[near], eta[near]))
        cutoff_active[near] = np.abs(s) > _band(state2.gas.gamma)[0]

    return CoefficientSet(A11 + delta, A12, A22 + delta, delta, cutoff_active, weight)


def assemble_coefficients(domain, state2, trial, phi, epsilon, delta):
    """:py:func:`coeffs_combined` over every node of ``domain``

    :param trial: :py:class:`~wedgeshock.geometry.ScalarField` feeding the cutoff
    :param phi: the frozen iterate feeding everything else
    """
    return coeffs_combined(
        state2, trial.gradient(), phi.values, phi.gradient(),
        (domain.xi, domain.eta), epsilon, delta,
    )


class BoundaryConditionRow(object):
    """``b1 psi_xi + b2 psi_eta + b3 psi = value`` (or ``psi = value``
    when ``kind`` is :py:data:`DIRICHLET`)"""

    def __init__(self, kind, coefficients=(0.0, 0.0, 1.0), value=0.0, normal=None, obliqueness=None):
        self.kind = kind
        self.coefficients = tuple(float(c) for c in coefficients)
        self.value = float(value)
        self.normal = normal
        self.obliqueness = obliqueness

    def __repr__(self):
        return "BoundaryConditionRow({0}, b={1!r}, value={2!r})".format(
            self.kind, self.coefficients, self.value
        )

    @classmethod
    def dirichlet(cls, value=0.0):
        return cls(DIRICHLET, (0.0, 0.0, 1.0), value)

    @classmethod
    def neumann(cls, direction, value=0.0):
        direction = (float(direction[0]), float(direction[1]))
        return cls(NEUMANN, direction + (0.0,), value, direction, 1.0)

    def residual(self, value, gradient):
        """``row(psi) - value`` for one node"""
        b1, b2, b3 = self.coefficients
        if self.kind == DIRICHLET:
            return value - self.value
        return b1 * gradient[0] + b2 * gradient[1] + b3 * value - self.value


def rh_linearization(state2, psi_value, psi_grad, eta):
    """the shock condition ``Psi(p, z, eta)`` and its exact partial
    derivatives ``(dPsi/dp1, dPsi/dp2, dPsi/dz)``

    ``Psi`` is the mass flux jump across the shock along the unit
    normal of ``phi1 - phi``, with the shock abscissa eliminated through
    continuity of the pseudo-potential. Vectorized over nodes.
    """
    gas = state2.gas
    k = gas.exponent
    jump = gas.u1 - state2.u2
    p1 = np.asarray(psi_grad[0], dtype=float)
    p2 = np.asarray(psi_grad[1], dtype=float)
    z = np.asarray(psi_value, dtype=float)
    eta = np.asarray(eta, dtype=float)

    xi = (z + state2.v2 * eta) / jump + state2.xihat
    radicand = clamp_radicand(
        state2.rho2 ** (gas.gamma - 1.0) + xi * p1 + eta * p2 - 0.5 * (p1 ** 2 + p2 ** 2) - z
    )
    rho = radicand ** k
    with np.errstate(divide="ignore"):
        rho_prime = np.where(radicand > 0, k * radicand ** (k - 1.0), 0.0)

    flow = (p1 - xi, p2 - eta)
    V = (rho * flow[0] - gas.rho1 * (jump - xi), rho * flow[1] - gas.rho1 * (-state2.v2 - eta))
    n = (jump - p1, -state2.v2 - p2)
    N = np.hypot(n[0], n[1])
    nu = (n[0] / N, n[1] / N)
    psi = V[0] * nu[0] + V[1] * nu[1]

    dV1 = (rho_prime * (xi - p1) * flow[0] + rho, rho_prime * (xi - p1) * flow[1])
    dV2 = (rho_prime * (eta - p2) * flow[0], rho_prime * (eta - p2) * flow[1] + rho)
    dVz = (
        rho_prime * (p1 / jump - 1.0) * flow[0] + (gas.rho1 - rho) / jump,
        rho_prime * (p1 / jump - 1.0) * flow[1],
    )

    def dnu(dn):
        along = nu[0] * dn[0] + nu[1] * dn[1]
        return ((dn[0] - nu[0] * along) / N, (dn[1] - nu[1] * along) / N)

    dnu1 = dnu((-1.0, 0.0))
    dnu2 = dnu((0.0, -1.0))
    b1 = dV1[0] * nu[0] + dV1[1] * nu[1] + V[0] * dnu1[0] + V[1] * dnu1[1]
    b2 = dV2[0] * nu[0] + dV2[1] * nu[1] + V[0] * dnu2[0] + V[1] * dnu2[1]
    b3 = dVz[0] * nu[0] + dVz[1] * nu[1]
    return psi, (b1, b2, b3)


def rh_condition_row(state2, psi_value, psi_grad, eta, normal=None, fraction=OBLIQUENESS_FRACTION):
    """Newton row of the shock condition around the current iterate:
    ``b . (Dpsi, psi)_new = b . (Dpsi, psi)_old - Psi_old``

    :param normal: unit normal of the shock pointing into the domain;
      when given the row must have ``(b1, b2) . normal`` above
      ``fraction * rho2' (c2^2 - xihat^2)``
    :raises ObliquenessLost:
    """
    psi, (b1, b2, b3) = rh_linearization(state2, psi_value, psi_grad, eta)
    psi, b1, b2, b3 = (float(v) for v in (psi, b1, b2, b3))
    value = b1 * psi_grad[0] + b2 * psi_grad[1] + b3 * psi_value - psi

    obliqueness = None
    if normal is not None:
        obliqueness = b1 * normal[0] + b2 * normal[1]
        floor = fraction * obliqueness_scale(state2)
        if not obliqueness > floor:
            raise ObliquenessLost(obliqueness, floor, float(eta))
    return BoundaryConditionRow(OBLIQUE, (b1, b2, b3), value, normal, obliqueness)


def obliqueness_scale(state2):
    """``rho2' (c2^2 - xihat^2)``, the leading coefficient of the shock row"""
    return state2.density_slope * (state2.c2 ** 2 - state2.xihat ** 2)


def shock_normal(slope):
    """unit normal of ``xi = f(eta)`` pointing towards larger ``xi``"""
    norm = math.hypot(1.0, slope)
    return (1.0 / norm, -slope / norm)


def fixed_bc_rows(domain):
    """rows of the sonic arc (``psi = 0``), the wedge (``psi_nu = 0``)
    and the symmetry line (``psi_eta = -v2``), keyed by node"""
    state2 = domain.state2
    rows = {}
    wedge = (-math.sin(state2.theta_w), math.cos(state2.theta_w))
    for node in domain.nodes(SONIC):
        rows[node] = BoundaryConditionRow.dirichlet(0.0)
    for node in domain.nodes(WEDGE):
        rows[node] = BoundaryConditionRow.neumann(wedge, 0.0)
    for node in domain.nodes(SYMMETRY):
        rows[node] = BoundaryConditionRow.neumann((0.0, 1.0), -state2.v2)
    return rows


def shock_rows(domain, psi, fraction=OBLIQUENESS_FRACTION):
    """Newton rows of the shock condition at the free-boundary nodes
    around the iterate ``psi``"""
    state2 = domain.state2
    gradient = psi.gradient()
    rows = {}
    for node in domain.nodes(SHOCK):
        eta = domain.eta[node]
        normal = shock_normal(float(domain.fb.derivative(eta)))
        rows[node] = rh_condition_row(
            state2, psi.values[node], (gradient[0][node], gradient[1][node]),
            eta, normal, fraction,
        )
    return rows
