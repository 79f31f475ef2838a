#!/usr/bin/env python
# -*- coding: utf-8 -*-


class WedgeShockError(Exception):
    """Base exception class for every error originated in :py:mod:`wedgeshock`"""


class ConfigurationError(WedgeShockError):
    """raised by :py:class:`~wedgeshock.config.RunConfig` when a config
    text or a command-line option cannot be turned into a valid run

    ::

      >>> RunConfig.parse("gamma = two")
      Traceback (most recent call last):
          ...
      ConfigurationError: invalid value for 'gamma': 'two' (expected float)
    """

    def __init__(self, key, problem):
        self.key = key
        self.problem = problem
        if key:
            msg = "invalid value for {0}: {1}".format(repr(key), problem)
        else:
            msg = problem
        super(ConfigurationError, self).__init__(msg)


class DegenerateShock(WedgeShockError):
    """raised by :py:func:`~wedgeshock.gas.incident_shock` when the
    downstream density does not exceed the upstream one"""

    def __init__(self, rho0, rho1):
        self.rho0 = rho0
        self.rho1 = rho1
        msg = "no compressive incident shock for rho0={0!r}, rho1={1!r}".format(
            rho0, rho1
        )
        super(DegenerateShock, self).__init__(msg)


class VacuumState(WedgeShockError):
    """raised when the Bernoulli radicand becomes negative"""

    def __init__(self, radicand, where=None):
        self.radicand = radicand
        self.where = where
        msg = "negative Bernoulli radicand {0:.6e}".format(radicand)
        if where is not None:
            msg = "{0} at {1}".format(msg, where)
        super(VacuumState, self).__init__(msg)


class RootNotBracketed(WedgeShockError):
    """raised by :py:func:`~wedgeshock.states.normal_reflection` when the
    scalar equation has no sign change on the search interval"""

    def __init__(self, low, high):
        self.low = low
        self.high = high
        msg = "normal reflection density not bracketed in ({0!r}, {1!r})".format(
            low, high
        )
        super(RootNotBracketed, self).__init__(msg)


class InvariantViolated(WedgeShockError):
    """raised when a freshly computed object fails one of its invariants"""

    def __init__(self, owner, invariant, detail=""):
        self.owner = owner
        self.invariant = invariant
        msg = "{0} violates {1}".format(owner, invariant)
        if detail:
            msg = "{0}: {1}".format(msg, detail)
        super(InvariantViolated, self).__init__(msg)


class OriginSingularity(WedgeShockError):
    """raised for polar quantities requested at r = 0"""

    def __init__(self, point):
        self.point = point
        msg = "polar coordinates are undefined at {0!r}".format(tuple(point))
        super(OriginSingularity, self).__init__(msg)


class ArcsineDomain(WedgeShockError):
    """raised by the sonic-frame reference shock outside its strip"""

    def __init__(self, x, limit):
        self.x = x
        self.limit = limit
        msg = "x={0!r} is beyond the reference shock strip (x < {1!r})".format(
            x, limit
        )
        super(ArcsineDomain, self).__init__(msg)


class SolverError(WedgeShockError):
    """parent class of the numerical failures that mean *the run did
    not converge*; the command line maps all of them to exit code 2"""


class NewtonDiverged(SolverError):
    """raised by :py:func:`~wedgeshock.states.state2_solve`"""

    def __init__(self, sigma, iterations, residual, reason=""):
        self.sigma = sigma
        self.iterations = iterations
        self.residual = residual
        msg = "state (2) Newton failed for sigma={0!r} after {1} iterations (residual {2:.3e})".format(
            sigma, iterations, residual
        )
        if reason:
            msg = "{0}: {1}".format(msg, reason)
        super(NewtonDiverged, self).__init__(msg)


class MeshFold(SolverError):
    """raised by :py:func:`~wedgeshock.geometry.build_domain` when the
    free boundary crosses the reference shock from below or the mapped
    grid degenerates"""

    def __init__(self, reason, location=None):
        self.reason = reason
        self.location = location
        msg = "mesh fold: {0}".format(reason)
        if location is not None:
            msg = "{0} (at {1!r})".format(msg, location)
        super(MeshFold, self).__init__(msg)


class NonMonotone(SolverError):
    """raised when an updated free boundary leaves the region where it
    bounds a simply connected domain"""

    def __init__(self, reason, eta=None):
        self.reason = reason
        self.eta = eta
        msg = "free boundary update rejected: {0}".format(reason)
        if eta is not None:
            msg = "{0} near eta={1:.6g}".format(msg, eta)
        super(NonMonotone, self).__init__(msg)


class ObliquenessLost(SolverError):
    """raised when the linearized Rankine-Hugoniot row stops being oblique"""

    def __init__(self, value, floor, eta):
        self.value = value
        self.floor = floor
        self.eta = eta
        msg = "shock row obliqueness {0:.6e} <= floor {1:.6e} at eta={2:.6g}".format(
            value, floor, eta
        )
        super(ObliquenessLost, self).__init__(msg)


class LinearSolveStalled(SolverError):
    """raised by :py:func:`~wedgeshock.solver.solve_linear_bvp` when the
    Krylov residual does not reach the requested tolerance"""

    def __init__(self, residual, tolerance, iterations):
        self.residual = residual
        self.tolerance = tolerance
        self.iterations = iterations
        msg = "linear solve stalled at relative residual {0:.3e} > {1:.1e} ({2} iterations)".format(
            residual, tolerance, iterations
        )
        super(LinearSolveStalled, self).__init__(msg)


class IllPosedRow(SolverError):
    """raised when an assembled row has a zero diagonal entry"""

    def __init__(self, node, kind):
        self.node = node
        self.kind = kind
        msg = "{0} row at node {1!r} has a zero diagonal".format(kind, tuple(node))
        super(IllPosedRow, self).__init__(msg)


class PicardDiverged(SolverError):
    """raised when the frozen-coefficient iteration does not settle"""

    def __init__(self, delta, iterations, change):
        self.delta = delta
        self.iterations = iterations
        self.change = change
        msg = "Picard iteration at delta={0:.3e} not converged after {1} iterations (last change {2:.3e})".format(
            delta, iterations, change
        )
        super(PicardDiverged, self).__init__(msg)


class BarrierViolated(SolverError):
    """raised when the computed field breaks the lower barrier psi >= 0"""

    def __init__(self, minimum, tolerance, node):
        self.minimum = minimum
        self.tolerance = tolerance
        self.node = node
        msg = "psi={0:.3e} below -{1:.1e} at node {2!r}".format(
            minimum, tolerance, tuple(node)
        )
        super(BarrierViolated, self).__init__(msg)


class MaxOuterExceeded(SolverError):
    """raised by :py:func:`~wedgeshock.iteration.run_to_fixed_point`"""

    def __init__(self, iterations, residual, tolerance):
        self.iterations = iterations
        self.residual = residual
        self.tolerance = tolerance
        msg = "free boundary iteration stopped after {0} steps (residual {1:.3e} > {2:.1e})".format(
            iterations, residual, tolerance
        )
        super(MaxOuterExceeded, self).__init__(msg)
