#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math

import numpy as np

from wedgeshock.states import normal_reflection
from wedgeshock.iteration import IterationConfig
from wedgeshock.iteration import outer_step
from wedgeshock.iteration import run_to_fixed_point
from wedgeshock.verification import shock_distance
from wedgeshock.verification import normal_reflection_limit
from tests.helpers import gamma_two


def solve(sigma, resolution, **overrides):
    gas = gamma_two()
    config = IterationConfig.defaults(normal_reflection(gas), sigma, resolution=resolution, **overrides)
    return run_to_fixed_point(gas, 0.5 * math.pi - sigma, config)


def test_regular_reflection_passes_the_battery():
    ("run_to_fixed_point() at sigma=0.01 on a 64x64 grid should converge and pass every check")

    # Given gamma=2 at sigma=0.01 with the default viscosity schedule
    # When I iterate to the fixed point
    solution = solve(0.01, (64, 64))

    # Then it converged
    solution.converged.should.be.true
    solution.residual.should.be.lower_than(solution.config.tol_fb)

    # And the whole verification battery passes
    solution.verification.failures.should.equal([])
    solution.verification.passed.should.be.true

    # And the free boundary stays within a few sigma of xitilde
    solution.diagnostics["shock_offset"].should.be.lower_than(0.05)
    shock_distance(solution).should.be.lower_than(0.1)
    np.isfinite(solution.psi.values).all().should.be.true


def test_fixed_point_is_idempotent():
    ("outer_step() from a converged fixed point should move the shock by at most tol_fb")

    # Given a fixed point at sigma=0.01
    solution = solve(0.01, (32, 32))

    # When I take one more outer step from it
    fb, psi = outer_step(solution.state2, solution.fb, solution.psi, solution.config)

    # Then the shock stays put
    fb.sup_distance(solution.fb).should.be.lower_than(solution.config.tol_fb)
    psi.values.shape.should.equal((32, 32))


def test_sigma_sweep_converges_to_normal_reflection():
    ("normal_reflection_limit() over sigma = 0.02, 0.01, 0.005 should halve the distance with sigma")

    # Given three wedge angles on a 32x32 grid
    # When I tabulate the distances to normal reflection
    table = normal_reflection_limit(gamma_two(), [0.02, 0.01, 0.005], samples=65, resolution=(32, 32))

    # Then they decrease monotonically
    len(table).should.equal(3)
    [row["sigma"] for row in table.rows].should.equal([0.02, 0.01, 0.005])
    table.monotone.should.be.true

    # And the shock distance halves with sigma
    for row in table.rows[1:]:
        row["shock_ratio"].should.be.within(1.5, 2.5)
    table.ratios_ok.should.be.true
    table.passed.should.be.true


def test_shock_curves_converge_under_refinement():
    ("the fixed-point shock at sigma=0.01 should be Cauchy at second order over 16, 32 and 64 nodes")

    # Given the fixed points on three grids
    curves = [solve(0.01, (n, n)).fb for n in (16, 32, 64)]

    # When I compare them on common ordinates
    eta = np.linspace(curves[0].eta.min(), curves[0].eta.max(), 257)
    values = [curve(eta) for curve in curves]
    coarse = float(np.max(np.abs(values[0] - values[1])))
    fine = float(np.max(np.abs(values[1] - values[2])))

    # Then halving h divides the difference by about four
    fine.should.be.lower_than(coarse)
    (coarse / fine).should.be.within(3.0, 5.0)
