# -*- coding: utf-8 -*-
import math

import numpy as np

from wedgeshock.gas import incident_shock
from wedgeshock.states import state2_solve
from wedgeshock.states import normal_reflection
from wedgeshock.geometry import ScalarField
from wedgeshock.geometry import FreeBoundaryCurve
from wedgeshock.geometry import build_domain
from wedgeshock.iteration import IterationConfig
from wedgeshock.iteration import ReflectionSolution


def gamma_two():
    """the gas of every closed-form example: gamma=2, rho0=1, rho1=2"""
    return incident_shock(2.0, 1.0, 2.0)


def state_two(sigma, gas=None):
    gas = gas or gamma_two()
    return state2_solve(gas, 0.5 * math.pi - sigma)


def straight_domain(sigma=0.0, resolution=(16, 16), gas=None):
    """the grid of the reference configuration ``f = l``"""
    gas = gas or gamma_two()
    normal = normal_reflection(gas)
    state2 = state2_solve(gas, 0.5 * math.pi - sigma, normal=normal)
    config = IterationConfig.defaults(normal, sigma, resolution=resolution)
    fb = FreeBoundaryCurve.straight(state2, resolution[0])
    return build_domain(state2, fb, resolution, config.epsilon), config


def synthetic_solution(values=None, sigma=0.0, resolution=(24, 24)):
    """a :py:class:`ReflectionSolution` on the straight-shock grid with
    ``psi`` given by ``values(domain)`` (zero by default), for exercising
    the verification checks without running the solver"""
    domain, config = straight_domain(sigma, resolution)
    psi = np.zeros(domain.shape) if values is None else values(domain)
    return ReflectionSolution(
        domain.state2.gas, domain.state2, config, domain.fb, domain,
        ScalarField(domain, psi), residuals=[0.0], converged=True,
    )
