#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np

from wedgeshock.solver import delta_schedule
from wedgeshock.solver import barrier_tolerance
from wedgeshock.solver import assemble_linear_system
from wedgeshock.solver import solve_linear_bvp
from wedgeshock.solver import solve_nonlinear_bvp
from wedgeshock.solver import supersolution_residual
from wedgeshock.assembly import CoefficientSet
from wedgeshock.assembly import BoundaryConditionRow
from wedgeshock.geometry import WEDGE
from wedgeshock.geometry import INTERIOR
from wedgeshock.geometry import ScalarField
from wedgeshock.geometry import ReflectionDomain
from wedgeshock.errors import IllPosedRow
from wedgeshock.errors import InvariantViolated
from tests.helpers import straight_domain


def harmonic(xi, eta):
    return np.cos(xi) * np.cosh(eta)


def manufactured_rows(domain):
    """Neumann on the bottom edge, Dirichlet with the exact values elsewhere"""
    rows = {}
    for node in map(tuple, np.argwhere(domain.boundary != INTERIOR)):
        node = (int(node[0]), int(node[1]))
        xi, eta = domain.xi[node], domain.eta[node]
        if domain.boundary[node] == WEDGE:
            rows[node] = BoundaryConditionRow.neumann((0.0, 1.0), np.cos(xi) * np.sinh(eta))
        else:
            rows[node] = BoundaryConditionRow.dirichlet(harmonic(xi, eta))
    return rows


def test_delta_schedule():
    ("delta_schedule() should halve from delta_max and finish at the final value")

    schedule = delta_schedule(0.1, 11, 0.0)

    len(schedule).should.equal(12)
    schedule[0].should.equal(0.1)
    schedule[10].should.equal(0.1 / 1024, epsilon=1e-18)
    schedule[-1].should.equal(0.0)
    delta_schedule(0.1, 3, None).should.equal([0.1, 0.05, 0.025])


def test_barrier_tolerance():
    ("barrier_tolerance() should be 10 h^2 on a coarse grid")

    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.0, 1.0), (5, 5))

    barrier_tolerance(domain).should.equal(10 * 0.25 ** 2, epsilon=1e-15)


def test_manufactured_solution_converges_at_second_order():
    ("solve_linear_bvp() should converge at second order to a harmonic function")

    # Given cos(xi) cosh(eta) on [0, 1] x [0.5, 1.5] from 32 to 128 cells a side
    errors = []
    for n in (33, 65, 129):
        domain = ReflectionDomain.rectangle((0.0, 1.0), (0.5, 1.5), (n, n))

        # When I solve the Laplace problem with its boundary data
        field = solve_linear_bvp(domain, CoefficientSet.laplace(domain.shape), manufactured_rows(domain))

        errors.append(float(np.max(np.abs(field.values - harmonic(domain.xi, domain.eta)))))
        field.linear_residual.should.be.lower_than(1e-10)

    # Then halving h divides the error by four
    (errors[0] / errors[1]).should.be.within(3.5, 4.5)
    (errors[1] / errors[2]).should.be.within(3.5, 4.5)


def test_assemble_linear_system_needs_every_boundary_row():
    ("assemble_linear_system() should raise InvariantViolated when a boundary node has no row")

    # Given all rows but one
    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.5, 1.5), (9, 9))
    rows = manufactured_rows(domain)
    del rows[(4, 0)]

    # Then assembly refuses
    assemble_linear_system.when.called_with(domain, CoefficientSet.laplace(domain.shape), rows).should.throw(
        InvariantViolated
    )


def test_assemble_linear_system_rejects_tangential_rows():
    ("assemble_linear_system() should raise IllPosedRow for a derivative purely along the edge")

    # Given a tangential derivative on the bottom edge
    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.5, 1.5), (9, 9))
    rows = manufactured_rows(domain)
    rows[(4, 0)] = BoundaryConditionRow.neumann((1.0, 0.0), 0.0)

    # Then its diagonal is zero
    assemble_linear_system.when.called_with(domain, CoefficientSet.laplace(domain.shape), rows).should.throw(
        IllPosedRow
    )


def test_linear_system_residual():
    ("LinearSystem.residual() should vanish at the solution of the system")

    domain = ReflectionDomain.rectangle((0.0, 1.0), (0.5, 1.5), (9, 9))
    rows = manufactured_rows(domain)
    system = assemble_linear_system(domain, CoefficientSet.laplace(domain.shape), rows)
    field = solve_linear_bvp(domain, CoefficientSet.laplace(domain.shape), rows)

    residual = system.residual(field.values)

    (np.linalg.norm(residual) / np.linalg.norm(system.rhs)).should.be.lower_than(1e-9)
    system.index((2, 3)).should.equal(2 * 9 + 3)


def test_nonlinear_solve_keeps_zero_at_normal_reflection():
    ("solve_nonlinear_bvp() at sigma=0 should return psi = 0 after one Picard step per level")

    # Given normal reflection on the straight-shock grid
    domain, config = straight_domain(0.0, (16, 16))
    zero = ScalarField.zeros(domain)

    # When I solve with a short viscosity schedule
    psi, report = solve_nonlinear_bvp(domain, domain.state2, zero, config.epsilon, [0.1, 0.0])

    # Then psi stays zero
    np.abs(psi.values).max().should.be.lower_than(1e-10)
    report.deltas.should.equal([0.1, 0.0])
    report.picard_iterations.should.equal([1, 1])
    report.viscous_fallback.should.be.false
    report.min_margin.should.be.greater_than(0.0)


def test_nonlinear_solve_needs_a_decreasing_schedule():
    ("solve_nonlinear_bvp() should raise InvariantViolated for a schedule that does not decrease")

    domain, config = straight_domain(0.0, (16, 16))
    zero = ScalarField.zeros(domain)

    solve_nonlinear_bvp.when.called_with(
        domain, domain.state2, zero, config.epsilon, [0.1, 0.1, 0.0]
    ).should.throw(InvariantViolated)


def test_supersolution_residual_of_zero():
    ("supersolution_residual() should report the nodes of the inner strip")

    # Given the straight-shock grid at a small sigma
    domain, config = straight_domain(0.01, (64, 16))
    zero = ScalarField.zeros(domain)

    # When I apply the operator to w = 0
    residuals, nodes = supersolution_residual(domain, domain.state2, zero, config.epsilon)

    # Then it vanishes at interior nodes with 0 < x < eps
    len(residuals).should.equal(len(nodes))
    len(nodes).should.be.greater_than(0)
    np.abs(residuals).max().should.be.lower_than(barrier_tolerance(domain))
    for node in nodes:
        domain.x[node].should.be.lower_than(config.epsilon)
