#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math

import numpy as np

from wedgeshock.states import StateTwo
from wedgeshock.verification import CHECKS
from wedgeshock.verification import Check
from wedgeshock.verification import ConvergenceTable
from wedgeshock.verification import VerificationReport
from wedgeshock.verification import run_battery
from wedgeshock.verification import check_state_two
from wedgeshock.verification import check_nonnegative
from wedgeshock.verification import check_monotone_eta
from wedgeshock.verification import check_bernoulli_box
from wedgeshock.verification import check_shock_ordering
from wedgeshock.verification import check_cutoff_inactive
from wedgeshock.verification import check_shock_conditions
from wedgeshock.verification import check_quadratic_sonic_bound
from wedgeshock.verification import normal_potential
from wedgeshock.verification import w11_distance
from wedgeshock.verification import shock_distance
from wedgeshock.verification import corner_distance
from wedgeshock.verification import convergence_table
from wedgeshock.verification import normal_reflection_limit
from tests.helpers import gamma_two
from tests.helpers import synthetic_solution

TOLERANCE = 1e-6


def test_zero_solution_passes_every_check():
    ("run_battery() should pass every check on psi = 0 at normal reflection")

    # Given the exact solution of normal reflection
    solution = synthetic_solution()

    # When I run the battery
    report = run_battery(solution, TOLERANCE)

    # Then nothing fails
    report.failures.should.equal([])
    report.passed.should.be.true
    len(report.checks).should.equal(len(CHECKS) + 1)
    report["bernoulli_box"].verdict.should.equal("reported")


def test_cutoff_fault():
    ("check_cutoff_inactive() should fail when psi_x exceeds 4x/(3(gamma+1)) near the sonic arc")

    # Given psi = x^2 / 3, whose slope 2x/3 is above 4x/9
    solution = synthetic_solution(lambda domain: np.maximum(domain.x, 0.0) ** 2 / 3.0)

    # When I check the cutoff
    check = check_cutoff_inactive(solution, TOLERANCE)

    # Then it fails at a node of the strip
    check.passed.should.be.false
    check.verdict.should.equal("fail")
    solution.domain.x[check.location].should.be.lower_than(4 * solution.config.epsilon)


def test_quadratic_bound_fault():
    ("check_quadratic_sonic_bound() should fail for psi = x^2")

    solution = synthetic_solution(lambda domain: np.maximum(domain.x, 0.0) ** 2)

    check = check_quadratic_sonic_bound(solution, TOLERANCE)

    check.passed.should.be.false
    check.value.should.be.greater_than(TOLERANCE)


def test_monotone_fault():
    ("check_monotone_eta() should fail when psi grows with eta")

    solution = synthetic_solution(lambda domain: 1e-2 * domain.eta)

    check = check_monotone_eta(solution, TOLERANCE)

    check.passed.should.be.false
    check.value.should.equal(1e-2, epsilon=1e-8)


def test_nonnegative_fault():
    ("check_nonnegative() should fail for a negative psi")

    solution = synthetic_solution(lambda domain: np.full(domain.shape, -1e-3))

    check = check_nonnegative(solution, TOLERANCE)

    check.passed.should.be.false
    check.value.should.equal(1e-3, epsilon=1e-15)


def test_shock_conditions_fault():
    ("check_shock_conditions() should fail when psi jumps at one free-boundary node")

    # Given psi = 0 except at one shock node
    def values(domain):
        psi = np.zeros(domain.shape)
        psi[5, -1] = 1e-3
        return psi

    solution = synthetic_solution(values)

    # When I check the shock conditions
    check = check_shock_conditions(solution, TOLERANCE)

    # Then continuity is broken right there
    check.passed.should.be.false
    check.location.should.equal((5, solution.domain.shape[1] - 1))
    check.detail["continuity"].should.equal(1e-3, epsilon=1e-12)
    check.detail["entropy_failures"].should.equal(0)


def test_ellipticity_fault():
    ("run_battery() should fail the ellipticity check for a steep psi")

    solution = synthetic_solution(lambda domain: 5.0 * domain.xi)

    report = run_battery(solution, TOLERANCE)

    report["ellipticity_and_sonic_match"].passed.should.be.false
    report.passed.should.be.false


def test_state_two_fault():
    ("check_state_two() should fail when state (2) does not solve the von Neumann system")

    # Given a solution carrying a state with the wrong density
    solution = synthetic_solution()
    good = solution.state2
    solution.state2 = StateTwo(
        good.gas, good.normal, good.theta_w, 1.01 * good.rho2, good.theta_s, good.xitilde
    )

    # When I check it
    check = check_state_two(solution)

    # Then the residual is far above tolerance
    check.passed.should.be.false
    check.detail["von_neumann"].should.be.greater_than(1e-3)


def test_shock_ordering_fault():
    ("check_shock_ordering() should fail when the free boundary lies below the straight shock")

    solution = synthetic_solution()
    solution.fb = solution.fb.shifted(-1e-3)

    check = check_shock_ordering(solution, TOLERANCE)

    check.passed.should.be.false
    check.value.should.equal(1e-3, epsilon=1e-12)


def test_bernoulli_box_never_fails_the_battery():
    ("check_bernoulli_box() should be reported only")

    # Given a psi larger than the Bernoulli radius but otherwise harmless
    solution = synthetic_solution(lambda domain: np.full(domain.shape, 0.5))

    # When I run it alone
    check = check_bernoulli_box(solution)

    # Then it is diagnostic
    check.passed.should.be.false
    check.verdict.should.equal("reported")
    VerificationReport([check]).passed.should.be.true


def test_battery_turns_errors_into_failures():
    ("run_battery() should record a check that raised as failed with nan values")

    # Given psi so steep that the density radicand is negative
    solution = synthetic_solution(lambda domain: 50.0 * domain.xi)

    # When I run the battery
    report = run_battery(solution, TOLERANCE)

    # Then the offending check fails without stopping the others
    failed = report["ellipticity_and_sonic_match"]
    failed.passed.should.be.false
    math.isnan(failed.value).should.be.true
    failed.detail.should.have.key("error")
    len(report.checks).should.equal(len(CHECKS) + 1)


def test_check_as_dict():
    ("Check.as_dict() should carry the verdict and the location")

    check = Check("nonnegative", False, 2e-3, 1e-6, (3, 4), {"upper_constant": 0.0})

    check.as_dict().should.equal({
        "name": "nonnegative",
        "verdict": "fail",
        "value": 2e-3,
        "threshold": 1e-6,
        "location": [3, 4],
        "detail": {"upper_constant": 0.0},
    })
    VerificationReport([check])["nonnegative"].should.be(check)
    VerificationReport([check]).__getitem__.when.called_with("missing").should.throw(KeyError)


def test_normal_potential_regions():
    ("normal_potential() should be continuous across the incident and the reflected shock")

    # Given the gamma=2 normal reflection
    solution = synthetic_solution()
    gas = solution.gas
    normal = solution.normal

    # When I evaluate it on both sides of each shock
    eps = 1e-9
    xi = np.array([gas.xi0 - eps, gas.xi0 + eps, normal.xibar - eps, normal.xibar + eps])
    phi = normal_potential(gas, normal, xi, np.full(4, 0.3))

    # Then it is continuous
    phi[0].should.equal(phi[1], epsilon=1e-8)
    phi[2].should.equal(phi[3], epsilon=1e-8)


def test_distances_vanish_at_normal_reflection():
    ("the distances to normal reflection should vanish for psi = 0 at sigma=0")

    solution = synthetic_solution()

    shock_distance(solution).should.equal(0.0, epsilon=1e-14)
    corner_distance(solution).should.equal(0.0, epsilon=1e-14)
    w11_distance(solution, samples=33).should.equal(0.0, epsilon=1e-12)


def test_w11_distance_sees_psi():
    ("w11_distance() should grow with the gradient of psi")

    small = synthetic_solution(lambda domain: 1e-3 * domain.eta)
    large = synthetic_solution(lambda domain: 2e-3 * domain.eta)

    first = w11_distance(small, samples=33)
    second = w11_distance(large, samples=33)

    first.should.be.greater_than(0.0)
    (second / first).should.equal(2.0, epsilon=1e-6)


def test_convergence_table_flags():
    ("ConvergenceTable should require decreasing distances and ratios near 2 when sigma halves")

    rows = [
        {"sigma": 0.02, "shock_distance": 4e-3, "w11_distance": 2e-3, "corner_distance": 1e-3,
         "iterations": 9, "shock_ratio": None},
        {"sigma": 0.01, "shock_distance": 2e-3, "w11_distance": 1e-3, "corner_distance": 5e-4,
         "iterations": 8, "shock_ratio": 2.0},
    ]
    good = ConvergenceTable(rows)
    good.monotone.should.be.true
    good.ratios_ok.should.be.true
    good.passed.should.be.true
    good.array().shape.should.equal((2, 6))
    math.isnan(good.array()[0, 5]).should.be.true

    bad = ConvergenceTable([rows[0], dict(rows[1], shock_distance=3.9e-3, shock_ratio=1.03)])
    bad.ratios_ok.should.be.false
    bad.passed.should.be.false


def test_convergence_table_of_one_solution():
    ("convergence_table() of a single solution should have one row and no ratio")

    table = convergence_table([synthetic_solution()], samples=33)

    len(table).should.equal(1)
    table.rows[0]["sigma"].should.equal(0.0)
    table.rows[0]["shock_ratio"].should.be.none
    table.passed.should.be.true


def test_normal_reflection_limit_at_sigma_zero():
    ("normal_reflection_limit() at sigma=0 should find the normal reflection itself")

    table = normal_reflection_limit(
        gamma_two(), [0.0], samples=33, resolution=(16, 16), schedule=[0.1, 0.0]
    )

    len(table).should.equal(1)
    table.rows[0]["shock_distance"].should.be.lower_than(1e-10)
    table.rows[0]["iterations"].should.equal(1)
