#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.gas
~~~~~~~~~~~~~~

Polytropic-gas state algebra for self-similar potential flow.

Every function accepts scalars or numpy arrays of matching shape for the
pseudo-potential and its gradient, so the same code serves single-point
evaluation and whole-grid evaluation.

* ``RADICAND_CLAMP``: -1e-12 (radicands in ``[RADICAND_CLAMP, 0)`` are
  treated as exact zeros)
"""
import logging

import numpy as np

from wedgeshock.errors import DegenerateShock
from wedgeshock.errors import VacuumState
from wedgeshock.errors import InvariantViolated

RADICAND_CLAMP = -1e-12

logger = logging.getLogger(__name__)


class PseudoState(object):
    """a pseudo-potential value and its gradient at one or many points

    :param potential: scalar or array ``phi``
    :param grad: pair ``(phi_xi, phi_eta)`` of scalars or arrays
    """

    def __init__(self, potential, grad):
        self.potential = potential
        self.grad = (grad[0], grad[1])

    def __repr__(self):
        return "PseudoState(potential={0!r}, grad={1!r})".format(
            self.potential, self.grad
        )

    @property
    def speed_squared(self):
        return self.grad[0] ** 2 + self.grad[1] ** 2

    def flux_along(self, normal):
        return self.grad[0] * normal[0] + self.grad[1] * normal[1]


class GasSetup(object):
    """adiabatic exponent, upstream/downstream densities and the derived
    incident-shock data ``u1`` (flow speed behind the incident shock)
    and ``xi0`` (incident shock position)

    use :py:func:`incident_shock` to build one.
    """

    def __init__(self, gamma, rho0, rho1, u1, xi0):
        self.gamma = float(gamma)
        self.rho0 = float(rho0)
        self.rho1 = float(rho1)
        self.u1 = float(u1)
        self.xi0 = float(xi0)
        self.validate()

    def __repr__(self):
        return "GasSetup(gamma={0!r}, rho0={1!r}, rho1={2!r}, u1={3!r}, xi0={4!r})".format(
            self.gamma, self.rho0, self.rho1, self.u1, self.xi0
        )

    def validate(self):
        if not self.gamma > 1.0:
            raise InvariantViolated(self, "gamma > 1")
        if not 0.0 < self.rho0 < self.rho1:
            raise InvariantViolated(self, "0 < rho0 < rho1")
        if not self.xi0 > self.u1 > 0.0:
            raise InvariantViolated(self, "xi0 > u1 > 0")

    @property
    def exponent(self):
        """``1 / (gamma - 1)``"""
        return 1.0 / (self.gamma - 1.0)

    @property
    def bernoulli_constant(self):
        """``rho0 ** (gamma - 1)``"""
        return self.rho0 ** (self.gamma - 1.0)

    def enthalpy(self, rho):
        """``rho ** (gamma - 1)``; the Bernoulli law is written in this variable"""
        return np.power(rho, self.gamma - 1.0)

    def incident_states(self, xi, eta):
        """the uniform states ahead of (0) and behind (1) the incident
        shock, in the original self-similar coordinates
        """
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        half_r2 = 0.5 * (xi ** 2 + eta ** 2)
        state0 = PseudoState(-half_r2, (-xi, -eta))
        state1 = PseudoState(
            -half_r2 + self.u1 * (xi - self.xi0), (self.u1 - xi, -eta)
        )
        return state0, state1

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "rho0": self.rho0,
            "rho1": self.rho1,
            "u1": self.u1,
            "xi0": self.xi0,
        }


def incident_shock(gamma, rho0, rho1):
    """builds the :py:class:`GasSetup` of a plane incident shock moving
    into gas at rest

    :param gamma: adiabatic exponent, ``> 1``
    :param rho0: density of the gas at rest
    :param rho1: density behind the incident shock, ``> rho0``
    :raises DegenerateShock: when ``rho1 <= rho0``
    """
    gamma = float(gamma)
    rho0 = float(rho0)
    rho1 = float(rho1)
    if not gamma > 1.0:
        raise InvariantViolated("incident_shock", "gamma > 1", repr(gamma))
    if not rho0 > 0.0:
        raise InvariantViolated("incident_shock", "rho0 > 0", repr(rho0))
    if rho1 <= rho0:
        raise DegenerateShock(rho0, rho1)

    jump = rho1 ** (gamma - 1.0) - rho0 ** (gamma - 1.0)
    u1 = (rho1 - rho0) * np.sqrt(2.0 * jump / (rho1 ** 2 - rho0 ** 2))
    xi0 = rho1 * u1 / (rho1 - rho0)
    return GasSetup(gamma, rho0, rho1, float(u1), float(xi0))


def bernoulli_radicand(gas, state):
    """``rho0^(gamma-1) - phi - |D phi|^2 / 2``"""
    return gas.bernoulli_constant - state.potential - 0.5 * state.speed_squared


def clamp_radicand(radicand):
    radicand = np.asarray(radicand, dtype=float)
    if np.any(radicand < RADICAND_CLAMP):
        where = np.unravel_index(np.argmin(radicand), radicand.shape) if radicand.ndim else None
        raise VacuumState(float(np.min(radicand)), where)

    clamped = (radicand < 0.0)
    if np.any(clamped):
        logger.warning(
            "clamped %d Bernoulli radicand(s) within %.0e of zero",
            int(np.count_nonzero(clamped)),
            -RADICAND_CLAMP,
        )
        radicand = np.where(clamped, 0.0, radicand)
    return radicand


def density(gas, state):
    """``rho = (rho0^(gamma-1) - phi - |D phi|^2/2)^(1/(gamma-1))``

    :raises VacuumState: when the radicand is negative beyond the clamp
    """
    radicand = clamp_radicand(bernoulli_radicand(gas, state))
    rho = np.power(radicand, gas.exponent)
    return float(rho) if rho.ndim == 0 else rho


def sound_speed_squared(gas, state):
    """``c^2 = (gamma - 1) rho^(gamma - 1)``, i.e. ``(gamma-1)`` times the radicand"""
    radicand = clamp_radicand(bernoulli_radicand(gas, state))
    c2 = (gas.gamma - 1.0) * radicand
    return float(c2) if c2.ndim == 0 else c2


def sound_speed(gas, state):
    c = np.sqrt(sound_speed_squared(gas, state))
    return float(c) if np.ndim(c) == 0 else c


def ellipticity_margin(gas, state):
    """``c*^2 - |D phi|^2`` with ``c*^2 = 2(gamma-1)/(gamma+1) (rho0^(gamma-1) - phi)``

    positive exactly where the flow is pseudo-subsonic and the
    potential flow equation is elliptic.
    """
    limit = (
        2.0 * (gas.gamma - 1.0) / (gas.gamma + 1.0)
        * (gas.bernoulli_constant - np.asarray(state.potential, dtype=float))
    )
    margin = limit - state.speed_squared
    return float(margin) if np.ndim(margin) == 0 else margin


def rh_residual(gas, left, right, normal):
    """mass-flux jump ``rho(left) D phi_left . nu - rho(right) D phi_right . nu``

    zero iff the Rankine-Hugoniot condition holds across a discontinuity
    with unit normal ``normal``. Positive when more mass flows through
    the left side.
    """
    flux_left = density(gas, left) * left.flux_along(normal)
    flux_right = density(gas, right) * right.flux_along(normal)
    jump = flux_left - flux_right
    return float(jump) if np.ndim(jump) == 0 else jump


def entropy_check(density_upstream, density_downstream):
    """True when density increases in the pseudo-flow direction"""
    if density_upstream <= 0 or density_downstream <= 0:
        raise InvariantViolated(
            "entropy_check",
            "positive densities",
            "{0!r}, {1!r}".format(density_upstream, density_downstream),
        )
    return bool(density_downstream > density_upstream)
