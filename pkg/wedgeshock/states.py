#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.states
~~~~~~~~~~~~~~~~~

Normal reflection and the two-shock state (2) at the reflection point.

* ``SIGMA_MAX``: 0.15 (rad), default upper end of the wedge-angle
  deficit ``sigma = pi/2 - theta_w`` accepted by :py:func:`state2_solve`
* ``NEWTON_TOLERANCE``: 1e-12 (infinity norm of the residual)
"""
import math
import logging

import numpy as np
from scipy.optimize import brentq
from scipy.optimize import newton

from wedgeshock.gas import PseudoState
from wedgeshock.errors import RootNotBracketed
from wedgeshock.errors import NewtonDiverged
from wedgeshock.errors import InvariantViolated

SIGMA_MAX = 0.15
NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITERATIONS = 40
NEWTON_MAX_HALVINGS = 8
BRACKET_EXPANSIONS = 200

logger = logging.getLogger(__name__)


class NormalReflection(object):
    """the symmetric reflection off a wall perpendicular to the flow"""

    def __init__(self, gas, rho2bar, xibar, c2bar):
        self.gas = gas
        self.rho2bar = rho2bar
        self.xibar = xibar
        self.c2bar = c2bar

    def __repr__(self):
        return "NormalReflection(rho2bar={0!r}, xibar={1!r}, c2bar={2!r})".format(
            self.rho2bar, self.xibar, self.c2bar
        )

    @property
    def eta_sonic(self):
        """height where the reflected shock meets the sonic circle"""
        return math.sqrt(self.c2bar ** 2 - self.xibar ** 2)

    def residual(self, s=None):
        return _normal_reflection_equation(
            self.gas, self.rho2bar if s is None else s
        )

    def to_dict(self):
        return {"rho2bar": self.rho2bar, "xibar": self.xibar, "c2bar": self.c2bar}


def _normal_reflection_equation(gas, s):
    gm1 = gas.gamma - 1.0
    return (
        s ** gm1
        - gas.rho1 ** gm1
        - 0.5 * gas.u1 ** 2
        - gas.rho1 * gas.u1 ** 2 / (s - gas.rho1)
    )


def _normal_reflection_derivative(gas, s):
    gm1 = gas.gamma - 1.0
    return gm1 * s ** (gm1 - 1.0) + gas.rho1 * gas.u1 ** 2 / (s - gas.rho1) ** 2


def normal_reflection(gas):
    """solves the scalar equation of normal reflection for the density
    behind the reflected shock, then derives its position and the sonic
    speed behind it

    :raises RootNotBracketed: when no sign change is found
    """
    def F(s):
        return _normal_reflection_equation(gas, s)

    low = gas.rho1 * (1.0 + 1e-12) + 1e-300
    high = 2.0 * gas.rho1
    for _ in range(BRACKET_EXPANSIONS):
        if F(high) > 0:
            break
        low, high = high, 2.0 * high
    else:
        raise RootNotBracketed(gas.rho1, high)

    if not F(low) < 0:
        raise RootNotBracketed(low, high)

    rho2bar = brentq(F, low, high, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    # one Newton polish step keeps the residual at round-off level
    step = F(rho2bar) / _normal_reflection_derivative(gas, rho2bar)
    if abs(step) < 1e-8 * rho2bar:
        polished = rho2bar - step
        if abs(F(polished)) <= abs(F(rho2bar)):
            rho2bar = polished

    xibar = -gas.rho1 * gas.u1 / (rho2bar - gas.rho1)
    c2bar = math.sqrt((gas.gamma - 1.0) * rho2bar ** (gas.gamma - 1.0))
    result = NormalReflection(gas, float(rho2bar), float(xibar), float(c2bar))
    if not rho2bar > gas.rho1:
        raise InvariantViolated(result, "rho2bar > rho1")
    if not abs(xibar) < c2bar:
        raise InvariantViolated(result, "|xibar| < c2bar")
    return result


def vn_residual(gas, theta_w, trial):
    """residual of the three algebraic equations for ``(rho2, theta_s, xitilde)``

    the first equation places the reflection point on the straight
    reflected shock, the second is the Bernoulli law of state (2) and the
    third is the Rankine-Hugoniot condition across the straight shock.
    """
    rho2, theta_s, xitilde = trial
    u1, xi0, rho1 = gas.u1, gas.xi0, gas.rho1
    gm1 = gas.gamma - 1.0
    cos_ws = math.cos(theta_w - theta_s)
    sin_s = math.sin(theta_s)
    cos_s = math.cos(theta_s)

    first = (xitilde - xi0) * math.cos(theta_w) + xi0 * math.sin(theta_w) * cos_s / sin_s
    second = (
        rho2 ** gm1
        + u1 ** 2 * cos_s ** 2 / (2.0 * cos_ws ** 2)
        + u1 * math.sin(theta_w) * sin_s * xitilde / cos_ws
        - u1 * xi0
        - gas.bernoulli_constant
    )
    third = (
        (u1 * cos_s * math.tan(theta_s - theta_w) - xitilde * sin_s) * rho2
        - rho1 * (u1 - xitilde) * sin_s
    )
    return np.array([first, second, third])


def vn_jacobian(gas, theta_w, trial):
    """analytic Jacobian of :py:func:`vn_residual` with respect to
    ``(rho2, theta_s, xitilde)``"""
    rho2, theta_s, xitilde = trial
    u1, xi0, rho1 = gas.u1, gas.xi0, gas.rho1
    gm1 = gas.gamma - 1.0
    sin_w = math.sin(theta_w)
    cos_w = math.cos(theta_w)
    sin_s = math.sin(theta_s)
    cos_s = math.cos(theta_s)
    cos_ws = math.cos(theta_w - theta_s)
    tan_sw = math.tan(theta_s - theta_w)
    sec2_sw = 1.0 / math.cos(theta_s - theta_w) ** 2

    jac = np.zeros((3, 3))
    jac[0, 1] = -xi0 * sin_w / sin_s ** 2
    jac[0, 2] = cos_w

    jac[1, 0] = gm1 * rho2 ** (gm1 - 1.0)
    jac[1, 1] = (
        -u1 ** 2 * cos_s * sin_w / cos_ws ** 3
        + u1 * sin_w * cos_w * xitilde / cos_ws ** 2
    )
    jac[1, 2] = u1 * sin_w * sin_s / cos_ws

    jac[2, 0] = u1 * cos_s * tan_sw - xitilde * sin_s
    jac[2, 1] = (
        rho2 * (-u1 * sin_s * tan_sw + u1 * cos_s * sec2_sw - xitilde * cos_s)
        - rho1 * (u1 - xitilde) * cos_s
    )
    jac[2, 2] = (rho1 - rho2) * sin_s
    return jac


class StateTwo(object):
    """the constant state behind the straight reflected shock, expressed
    in coordinates shifted by its velocity ``(u2, v2)`` so that its
    sonic circle is centred at the origin

    Derived points (shifted coordinates):

    * ``P0``: the reflection point on the wedge (``eta = inf`` when
      ``sigma == 0``)
    * ``P1``: intersection of the straight shock with the sonic circle
    * ``P4``: intersection of the sonic circle with the wedge
    * ``P3``: the wedge vertex; ``P2`` lies on the free boundary and is
      only known once the domain is built
    """

    def __init__(self, gas, normal, theta_w, rho2, theta_s, xitilde, iterations=0):
        self.gas = gas
        self.normal = normal
        self.theta_w = float(theta_w)
        self.sigma = 0.5 * math.pi - self.theta_w
        self.rho2 = float(rho2)
        self.theta_s = float(theta_s)
        self.xitilde = float(xitilde)
        self.iterations = iterations

        if self.sigma == 0.0:
            self.u2 = 0.0
            self.v2 = 0.0
            self.cot_s = 0.0
        else:
            cos_ws = math.cos(self.theta_w - self.theta_s)
            self.u2 = gas.u1 * math.cos(self.theta_w) * math.cos(self.theta_s) / cos_ws
            self.v2 = self.u2 * math.tan(self.theta_w)
            self.cot_s = math.cos(self.theta_s) / math.sin(self.theta_s)

        self.c2 = math.sqrt((gas.gamma - 1.0) * self.rho2 ** (gas.gamma - 1.0))
        self.xihat = self.xitilde - self.u2 + self.v2 * self.cot_s
        self.eta1 = self._solve_p1()
        self.xi1 = self.reference_shock(self.eta1)
        self.P1 = (self.xi1, self.eta1)
        self.P4 = (self.c2 * math.cos(self.theta_w), self.c2 * math.sin(self.theta_w))
        self.P3 = (-self.u2, -self.v2)
        if self.sigma == 0.0:
            self.P0 = (gas.xi0 - self.u2, float("inf"))
        else:
            self.P0 = (gas.xi0 - self.u2, gas.xi0 * math.tan(self.theta_w) - self.v2)
        self.y1 = math.atan2(self.eta1, self.xi1) - self.theta_w

    def __repr__(self):
        return "StateTwo(sigma={0!r}, rho2={1!r}, theta_s={2!r}, xitilde={3!r})".format(
            self.sigma, self.rho2, self.theta_s, self.xitilde
        )

    @property
    def q2_squared(self):
        return self.u2 ** 2 + self.v2 ** 2

    @property
    def density_slope(self):
        """derivative of the density with respect to the Bernoulli
        radicand, evaluated at state (2): ``rho2 / c2^2``"""
        return self.rho2 / self.c2 ** 2

    def reference_shock(self, eta):
        """the straight reflected shock ``xi = l(eta)`` in shifted coordinates"""
        return eta * self.cot_s + self.xihat

    def _solve_p1(self):
        radius2 = self.c2 ** 2
        if not abs(self.xihat) < self.c2:
            raise InvariantViolated(self, "|xihat| < c2")

        def g(eta):
            return self.reference_shock(eta) ** 2 + eta ** 2 - radius2

        def dg(eta):
            return 2.0 * self.reference_shock(eta) * self.cot_s + 2.0 * eta

        seed = math.sqrt(radius2 - self.xihat ** 2)
        if self.cot_s == 0.0:
            return seed
        return float(newton(g, seed, fprime=dg, tol=1e-15, maxiter=50))

    def residual(self):
        return vn_residual(self.gas, self.theta_w, (self.rho2, self.theta_s, self.xitilde))

    def validate(self):
        """checks every invariant of the two-shock configuration

        :raises InvariantViolated: naming the first broken invariant
        """
        residual = np.max(np.abs(self.residual()))
        if residual > 10 * NEWTON_TOLERANCE * max(1.0, self.gas.xi0):
            raise InvariantViolated(self, "von Neumann residual", "{0:.3e}".format(residual))

        strict = self.sigma > 0.0
        if strict:
            ordered = math.pi / 4 < self.theta_s < self.theta_w < math.pi / 2
        else:
            ordered = math.pi / 4 < self.theta_s <= self.theta_w <= math.pi / 2
        if not ordered:
            raise InvariantViolated(self, "pi/4 < theta_s < theta_w < pi/2")

        if not self.xitilde < 0.0:
            raise InvariantViolated(self, "xitilde < 0")

        if strict:
            chain = -self.c2 < self.xitilde < self.xihat < self.xi1 < 0.0
        else:
            chain = -self.c2 < self.xitilde <= self.xihat <= self.xi1 < 0.0
        if not chain:
            raise InvariantViolated(self, "-c2 < xitilde < xihat < xi1 < 0")

        if strict and not math.isclose(
            self.v2, self.u2 * math.tan(self.theta_w), rel_tol=1e-12, abs_tol=1e-15
        ):
            raise InvariantViolated(self, "v2 = u2 tan(theta_w)")
        return self

    def background_potentials(self, xi, eta):
        """see :py:func:`background_potentials`"""
        return background_potentials(self, xi, eta)

    def to_dict(self):
        return {
            "sigma": self.sigma,
            "theta_w": self.theta_w,
            "rho2": self.rho2,
            "theta_s": self.theta_s,
            "xitilde": self.xitilde,
            "u2": self.u2,
            "v2": self.v2,
            "c2": self.c2,
            "xihat": self.xihat,
            "P0": list(self.P0),
            "P1": list(self.P1),
            "P4": list(self.P4),
            "y1": self.y1,
            "newton_iterations": self.iterations,
        }


def _damped_newton(gas, theta_w, seed):
    trial = np.array(seed, dtype=float)
    residual = vn_residual(gas, theta_w, trial)
    norm = np.max(np.abs(residual))
    sigma = 0.5 * math.pi - theta_w
    iterations = 0
    while norm > NEWTON_TOLERANCE:
        if iterations >= NEWTON_MAX_ITERATIONS:
            raise NewtonDiverged(sigma, iterations, norm, "iteration limit")

        try:
            step = np.linalg.solve(vn_jacobian(gas, theta_w, trial), -residual)
        except np.linalg.LinAlgError:
            raise NewtonDiverged(sigma, iterations, norm, "singular Jacobian")

        scale = 1.0
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            candidate = trial + scale * step
            if candidate[0] > gas.rho1 * (1.0 - 1e-6):
                candidate_residual = vn_residual(gas, theta_w, candidate)
                candidate_norm = np.max(np.abs(candidate_residual))
                if np.isfinite(candidate_norm) and candidate_norm < norm:
                    break
            scale *= 0.5
        else:
            raise NewtonDiverged(sigma, iterations, norm, "no decrease after step halving")

        trial, residual, norm = candidate, candidate_residual, candidate_norm
        iterations += 1
        logger.debug("state (2) Newton %d: residual %.3e (step scale %g)", iterations, norm, scale)

    return trial, iterations


def state2_solve(gas, theta_w, sigma_max=SIGMA_MAX, normal=None, seed=None):
    """solves for state (2) by damped Newton iteration, seeded at the
    normal reflection (or at ``seed`` when continuing along a path)

    :param theta_w: wedge angle in radians, ``pi/2 - sigma_max < theta_w <= pi/2``
    :raises NewtonDiverged: outside the accepted range or when Newton fails
    :raises InvariantViolated: when the converged state fails a check
    """
    normal = normal or normal_reflection(gas)
    sigma = 0.5 * math.pi - theta_w
    if sigma < 0.0:
        raise InvariantViolated("state2_solve", "theta_w <= pi/2", repr(theta_w))
    if sigma >= sigma_max:
        raise NewtonDiverged(
            sigma, 0, float("nan"),
            "outside the configured Newton basin sigma < {0!r}".format(sigma_max),
        )

    if seed is None:
        seed = (normal.rho2bar, 0.5 * math.pi, normal.xibar)

    if sigma == 0.0:
        solution, iterations = np.array([normal.rho2bar, theta_w, normal.xibar]), 0
    else:
        solution, iterations = _damped_newton(gas, theta_w, seed)

    state = StateTwo(gas, normal, theta_w, solution[0], solution[1], solution[2], iterations)
    state.validate()
    logger.info(
        "state (2) at sigma=%.6g: rho2=%.12g theta_s=%.12g xitilde=%.12g (%d Newton steps)",
        sigma, state.rho2, state.theta_s, state.xitilde, iterations,
    )
    return state


def state2_path(gas, sigmas, sigma_max=SIGMA_MAX):
    """monotone continuation in ``sigma``: each solve is seeded with the
    previous converged state. Returns the list of states and stops at
    the first failure, logging the largest ``sigma`` reached.
    """
    normal = normal_reflection(gas)
    states = []
    seed = None
    for sigma in sorted(sigmas):
        try:
            state = state2_solve(gas, 0.5 * math.pi - sigma, sigma_max, normal, seed)
        except NewtonDiverged as e:
            logger.warning("state (2) continuation stopped at sigma=%.6g: %s", sigma, e)
            break
        states.append(state)
        seed = (state.rho2, state.theta_s, state.xitilde)

    if states:
        logger.info("state (2) continuation reached sigma=%.6g", states[-1].sigma)
    return states


def background_potentials(state2, xi, eta):
    """evaluates the uniform states (0), (1) and (2) in shifted
    coordinates; returns three :py:class:`~wedgeshock.gas.PseudoState`
    """
    u1, xi0 = state2.gas.u1, state2.gas.xi0
    u2, v2 = state2.u2, state2.v2
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    half_r2 = 0.5 * (xi ** 2 + eta ** 2)
    half_q2 = 0.5 * state2.q2_squared
    constant = u1 * (u2 - xi0)

    phi0 = PseudoState(-half_r2 - (u2 * xi + v2 * eta) - half_q2, (-xi - u2, -eta - v2))
    phi1 = PseudoState(
        -half_r2 + (u1 - u2) * xi - v2 * eta - half_q2 + constant,
        (u1 - u2 - xi, -v2 - eta),
    )
    phi2 = PseudoState(
        -half_r2 - half_q2 + (u1 - u2) * state2.xihat + constant, (-xi, -eta)
    )
    return phi0, phi1, phi2


def regime_bounds(state2, normal=None):
    """the small-sigma regime in which the shock conditions can be
    rewritten in terms of ``psi``; returns a dict of named booleans and
    the Bernoulli-validity radius ``delta_star``
    """
    normal = normal or state2.normal
    gas = state2.gas
    c2bar, rho2bar = normal.c2bar, normal.rho2bar
    delta_star = min(
        rho2bar ** (gas.gamma - 1.0) / (50.0 * (1.0 + 4.0 * c2bar)),
        min(1.0, c2bar) * gas.u1 / 50.0,
    )
    return {
        "sonic_speed_close": 5 * c2bar / 6 <= state2.c2 <= 6 * c2bar / 5,
        "density_close": 5 * rho2bar / 6 <= state2.rho2 <= 6 * rho2bar / 5,
        "velocity_small": math.sqrt(state2.q2_squared) <= gas.u1 / 50.0,
        "shock_inside_sonic": abs(state2.xitilde) < state2.c2,
        "sonic_gap": state2.c2 - abs(state2.xitilde) >= 0.5 * (c2bar - abs(normal.xibar)),
        "delta_star": delta_star,
    }
