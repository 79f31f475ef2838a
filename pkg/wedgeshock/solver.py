#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.solver
~~~~~~~~~~~~~~~~~

Finite differences on the mapped grid, the linear oblique-derivative
problem and the frozen-coefficient iteration with vanishing viscosity.

Interior rows use the 9-point stencil of the logical square with the
chain rule through the grid map; a first-order upwind difference
replaces the central one along a logical direction where the
convection term dominates the diffusion term there (this is what
happens next to the degenerate sonic arc). Boundary rows use
second-order one-sided differences across the edge and central
differences along it.
"""
import logging

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu
from scipy.sparse.linalg import gmres
from scipy.sparse.linalg import LinearOperator

from wedgeshock.errors import SolverError
from wedgeshock.errors import IllPosedRow
from wedgeshock.errors import PicardDiverged
from wedgeshock.errors import BarrierViolated
from wedgeshock.errors import LinearSolveStalled
from wedgeshock.errors import InvariantViolated
from wedgeshock.assembly import DIRICHLET
from wedgeshock.assembly import OBLIQUENESS_FRACTION
from wedgeshock.assembly import shock_rows
from wedgeshock.assembly import fixed_bc_rows
from wedgeshock.assembly import assemble_coefficients
from wedgeshock.geometry import INTERIOR
from wedgeshock.geometry import ScalarField

LINEAR_TOLERANCE = 1e-10
PICARD_TOLERANCE = 1e-9
MAX_PICARD = 60
PICARD_RELAX_AFTER = 20
PICARD_RELAXATION = 0.5

logger = logging.getLogger(__name__)


def delta_schedule(delta_max=0.1, levels=11, final=0.0):
    """``delta_max * 2^-k`` for ``k < levels``, then ``final``"""
    schedule = [delta_max * 2.0 ** -k for k in range(levels)]
    if final is not None and (not schedule or final < schedule[-1]):
        schedule.append(float(final))
    return schedule


def barrier_tolerance(domain):
    """``max(1e-8, 10 h^2)``"""
    return max(1e-8, 10.0 * domain.spacing ** 2)


class LinearSystem(object):
    """sparse operator, right-hand side and the node numbering
    ``index = i * n_angular + j``"""

    def __init__(self, matrix, rhs, shape):
        self.matrix = matrix
        self.rhs = rhs
        self.shape = shape

    def __repr__(self):
        return "LinearSystem({0} unknowns, {1} nonzeros)".format(
            self.matrix.shape[0], self.matrix.nnz
        )

    def index(self, node):
        return node[0] * self.shape[1] + node[1]

    def residual(self, values):
        values = np.ravel(values)
        return self.rhs - self.matrix @ values


class SolveReport(object):
    """what happened during one :py:func:`solve_nonlinear_bvp` call"""

    def __init__(self):
        self.deltas = []
        self.picard_iterations = []
        self.picard_history = []
        self.linear_residual = 0.0
        self.min_margin = float("inf")
        self.viscous_fallback = False
        self.barrier_constant = 0.0
        self.sonic_constant = 0.0

    def __repr__(self):
        return "SolveReport(deltas={0}, picard={1}, fallback={2})".format(
            len(self.deltas), self.total_iterations, self.viscous_fallback
        )

    @property
    def iterations(self):
        return self.total_iterations

    @property
    def total_iterations(self):
        return int(sum(self.picard_iterations))

    def to_dict(self):
        return {
            "deltas": list(self.deltas),
            "picard_iterations": list(self.picard_iterations),
            "picard_history": [list(h) for h in self.picard_history],
            "linear_residual": self.linear_residual,
            "min_margin": self.min_margin,
            "viscous_fallback": self.viscous_fallback,
            "barrier_constant": self.barrier_constant,
            "sonic_constant": self.sonic_constant,
        }


def _interior_triplets(domain, coeffs):
    """(rows, cols, values) of the interior operator, indexed on the
    full grid numbering; returns the interior diagonal too"""
    ni, nj = domain.shape
    da, db = domain.da, domain.db
    K = domain.metrics.inverse[:, :, 1:-1, 1:-1]
    H = domain.metrics.hessian[:, :, :, 1:-1, 1:-1]
    A11 = coeffs.A11[1:-1, 1:-1]
    A12 = coeffs.A12[1:-1, 1:-1]
    A22 = coeffs.A22[1:-1, 1:-1]
    A = ((A11, A12), (A12, A22))

    G = np.zeros((2, 2) + A11.shape)
    F = np.zeros((2,) + A11.shape)
    for i in range(2):
        for j in range(2):
            for p in range(2):
                F[p] += A[i][j] * H[p, i, j]
                for q in range(2):
                    G[p, q] += K[p, i] * A[i][j] * K[q, j]

    weights = {}

    def add(di, dj, value):
        weights[(di, dj)] = weights.get((di, dj), 0.0) + value

    add(1, 0, G[0, 0] / da ** 2)
    add(-1, 0, G[0, 0] / da ** 2)
    add(0, 0, -2.0 * G[0, 0] / da ** 2 - 2.0 * G[1, 1] / db ** 2)
    add(0, 1, G[1, 1] / db ** 2)
    add(0, -1, G[1, 1] / db ** 2)
    cross = 2.0 * G[0, 1] / (4.0 * da * db)
    add(1, 1, cross)
    add(-1, -1, cross)
    add(1, -1, -cross)
    add(-1, 1, -cross)

    for direction, step, diffusion in ((0, da, G[0, 0]), (1, db, G[1, 1])):
        convection = F[direction]
        upwind = np.abs(convection) * step / 2.0 > diffusion
        forward = upwind & (convection > 0)
        backward = upwind & (convection < 0)
        central = ~upwind
        plus = (1, 0) if direction == 0 else (0, 1)
        minus = (-1, 0) if direction == 0 else (0, -1)
        add(plus[0], plus[1], np.where(central, convection / (2 * step), 0.0)
            + np.where(forward, convection / step, 0.0))
        add(minus[0], minus[1], np.where(central, -convection / (2 * step), 0.0)
            + np.where(backward, -convection / step, 0.0))
        add(0, 0, np.where(forward, -convection / step, 0.0)
            + np.where(backward, convection / step, 0.0))

    ii, jj = np.meshgrid(np.arange(1, ni - 1), np.arange(1, nj - 1), indexing="ij")
    centre = ii * nj + jj
    rows, cols, values = [], [], []
    for (di, dj), value in sorted(weights.items()):
        rows.append(centre.ravel())
        cols.append(((ii + di) * nj + (jj + dj)).ravel())
        values.append(np.broadcast_to(value, ii.shape).ravel())
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(values), weights[(0, 0)]


def _logical_stencil(index, count, step):
    """second-order difference weights of ``d/da`` at ``index``"""
    if index == 0:
        return ((0, -1.5 / step), (1, 2.0 / step), (2, -0.5 / step))
    if index == count - 1:
        return ((0, 1.5 / step), (-1, -2.0 / step), (-2, 0.5 / step))
    return ((1, 0.5 / step), (-1, -0.5 / step))


def _boundary_triplets(domain, bc_rows):
    ni, nj = domain.shape
    K = domain.metrics.inverse
    rows, cols, values = [], [], []
    rhs = {}
    for node in sorted(bc_rows):
        row = bc_rows[node]
        i, j = node
        centre = i * nj + j
        rhs[centre] = row.value
        if row.kind == DIRICHLET:
            rows.append(centre)
            cols.append(centre)
            values.append(1.0)
            continue

        b1, b2, b3 = row.coefficients
        along_a = b1 * K[0, 0][node] + b2 * K[0, 1][node]
        along_b = b1 * K[1, 0][node] + b2 * K[1, 1][node]
        entries = {centre: b3}
        for offset, weight in _logical_stencil(i, ni, domain.da):
            column = (i + offset) * nj + j
            entries[column] = entries.get(column, 0.0) + along_a * weight
        for offset, weight in _logical_stencil(j, nj, domain.db):
            column = i * nj + j + offset
            entries[column] = entries.get(column, 0.0) + along_b * weight

        scale = max(abs(v) for v in entries.values())
        if not abs(entries[centre]) > 1e-14 * scale:
            raise IllPosedRow(node, row.kind)
        for column, value in sorted(entries.items()):
            rows.append(centre)
            cols.append(column)
            values.append(value)
    return np.array(rows, dtype=int), np.array(cols, dtype=int), np.array(values), rhs


def assemble_linear_system(domain, coeffs, bc_rows, source=None):
    """
    :param coeffs: :py:class:`~wedgeshock.assembly.CoefficientSet` over the grid
    :param bc_rows: ``{(i, j): BoundaryConditionRow}`` for every boundary node
    :param source: interior right-hand side over the grid (zero by default)
    :raises IllPosedRow: when a row has a zero diagonal
    """
    ni, nj = domain.shape
    boundary = domain.boundary != INTERIOR
    boundary[0, :] = boundary[-1, :] = boundary[:, 0] = boundary[:, -1] = True
    missing = [tuple(int(k) for k in node) for node in np.argwhere(boundary)
               if tuple(int(k) for k in node) not in bc_rows]
    if missing:
        raise InvariantViolated("assemble_linear_system", "a row for every boundary node", repr(missing[0]))

    rows_i, cols_i, values_i, diagonal = _interior_triplets(domain, coeffs)
    if np.any(diagonal == 0.0):
        where = np.argwhere(diagonal == 0.0)[0]
        raise IllPosedRow((int(where[0]) + 1, int(where[1]) + 1), "interior")
    rows_b, cols_b, values_b, boundary_rhs = _boundary_triplets(domain, bc_rows)

    size = ni * nj
    matrix = sparse.coo_matrix(
        (np.concatenate([values_i, values_b]), (np.concatenate([rows_i, rows_b]), np.concatenate([cols_i, cols_b]))),
        shape=(size, size),
    ).tocsr()
    rhs = np.zeros(size)
    if source is not None:
        interior = np.zeros(domain.shape, dtype=bool)
        interior[1:-1, 1:-1] = True
        rhs[interior.ravel()] = np.asarray(source, dtype=float)[interior]
    for centre, value in boundary_rhs.items():
        rhs[centre] = value
    return LinearSystem(matrix, rhs, domain.shape)


def solve_system(system, tolerance=LINEAR_TOLERANCE):
    """sparse LU factorization as preconditioner and starting point of
    restarted GMRES

    :returns: ``(values, relative residual, iterations)``
    :raises LinearSolveStalled:
    """
    matrix = system.matrix.tocsc()
    rhs = system.rhs
    norm = np.linalg.norm(rhs)
    if norm == 0.0:
        return np.zeros_like(rhs), 0.0, 0

    try:
        lu = splu(matrix)
    except RuntimeError as e:
        logger.debug("LU factorization failed: %s", e)
        raise LinearSolveStalled(float("inf"), tolerance, 0)

    start = lu.solve(rhs)
    preconditioner = LinearOperator(matrix.shape, lu.solve)
    counter = {"iterations": 0}

    def count(_):
        counter["iterations"] += 1

    values, info = gmres(
        matrix, rhs, x0=start, M=preconditioner, rtol=tolerance, atol=0.0,
        restart=20, maxiter=20, callback=count, callback_type="pr_norm",
    )
    residual = float(np.linalg.norm(rhs - matrix @ values) / norm)
    if not np.all(np.isfinite(values)) or residual > tolerance:
        raise LinearSolveStalled(residual, tolerance, counter["iterations"])
    logger.debug("linear solve: %d unknowns, residual %.3e (%d GMRES steps)",
                 len(rhs), residual, counter["iterations"])
    return values, residual, counter["iterations"]


def solve_linear_bvp(domain, coeffs, bc_rows, tolerance=LINEAR_TOLERANCE, source=None):
    """solves the linear problem and returns a
    :py:class:`~wedgeshock.geometry.ScalarField`

    :raises LinearSolveStalled:
    :raises IllPosedRow:
    """
    system = assemble_linear_system(domain, coeffs, bc_rows, source)
    values, residual, _ = solve_system(system, tolerance)
    field = ScalarField(domain, values.reshape(domain.shape))
    field.linear_residual = residual
    return field


def _picard(domain, state2, phi, psi, epsilon, delta, fixed, report, tol_picard, max_picard,
            relax_after, fraction):
    history = []
    for iteration in range(1, max_picard + 1):
        coeffs = assemble_coefficients(domain, state2, psi, phi, epsilon, delta)
        rows = dict(fixed)
        rows.update(shock_rows(domain, psi, fraction))
        new = solve_linear_bvp(domain, coeffs, rows)
        report.linear_residual = new.linear_residual
        report.min_margin = min(report.min_margin, float(np.min(coeffs.eigenvalues()[0][1:-1, 1:-1])))

        values = new.values
        if iteration > relax_after:
            values = PICARD_RELAXATION * psi.values + (1.0 - PICARD_RELAXATION) * values
        change = float(np.max(np.abs(values - psi.values)))
        history.append(change)
        psi = psi.with_values(values)
        logger.debug("Picard %d at delta=%.3e: change %.3e", iteration, delta, change)
        if change <= tol_picard:
            return psi, history
    raise PicardDiverged(delta, max_picard, history[-1])


def solve_nonlinear_bvp(domain, state2, phi_iterate, epsilon, schedule=None,
                        tol_picard=PICARD_TOLERANCE, max_picard=MAX_PICARD,
                        relax_after=PICARD_RELAX_AFTER, fraction=OBLIQUENESS_FRACTION):
    """frozen-coefficient iteration for each viscosity of a decreasing
    schedule, each level warm-started from the previous one

    When the last level has zero viscosity and fails, the solution of
    the smallest positive viscosity is returned and the report is
    flagged.

    :param phi_iterate: :py:class:`~wedgeshock.geometry.ScalarField`
      freezing the coefficients (the trial field starts there too)
    :returns: ``(psi, SolveReport)``
    :raises PicardDiverged:
    :raises BarrierViolated: when ``psi`` drops below ``-max(1e-8, 10 h^2)``
    """
    schedule = delta_schedule() if schedule is None else list(schedule)
    if any(later >= earlier for earlier, later in zip(schedule, schedule[1:])) or schedule[-1] < 0:
        raise InvariantViolated("solve_nonlinear_bvp", "strictly decreasing nonnegative schedule", repr(schedule))

    report = SolveReport()
    fixed = fixed_bc_rows(domain)
    psi = phi_iterate
    for level, delta in enumerate(schedule):
        try:
            psi, history = _picard(
                domain, state2, phi_iterate, psi, epsilon, delta, fixed, report,
                tol_picard, max_picard, relax_after, fraction,
            )
        except SolverError as e:
            if delta == 0.0 and level > 0:
                logger.warning("zero-viscosity solve failed (%s); keeping delta=%.3e", e, schedule[level - 1])
                report.viscous_fallback = True
                break
            raise
        report.deltas.append(delta)
        report.picard_iterations.append(len(history))
        report.picard_history.append(history)
        logger.info("delta=%.3e: %d Picard iterations", delta, len(history))

    tolerance = barrier_tolerance(domain)
    lowest = psi.min()
    if lowest < -tolerance:
        node = np.unravel_index(np.argmin(psi.values), psi.values.shape)
        raise BarrierViolated(lowest, tolerance, tuple(int(k) for k in node))

    if state2.sigma > 0:
        report.barrier_constant = psi.max() / state2.sigma
        strip = (domain.x > 0) & (domain.x < 2.0 * epsilon)
        if np.any(strip):
            report.sonic_constant = float(
                np.max(np.abs(psi.values[strip]) / domain.x[strip]) * epsilon / state2.sigma
            )
    logger.info(
        "elliptic solve done: max psi %.3e, psi <= %.3g sigma, |psi| <= %.3g (sigma/eps) x",
        psi.max(), report.barrier_constant, report.sonic_constant,
    )
    return psi, report


def supersolution_residual(domain, state2, w, epsilon):
    """the zero-viscosity interior operator applied to ``w`` (both as the
    trial and as the frozen field) at interior nodes with ``0 < x < eps``

    :returns: ``(residuals, nodes)``
    """
    coeffs = assemble_coefficients(domain, state2, w, w, epsilon, 0.0)
    rows, cols, values, _ = _interior_triplets(domain, coeffs)
    size = domain.shape[0] * domain.shape[1]
    operator = sparse.coo_matrix((values, (rows, cols)), shape=(size, size)).tocsr()
    applied = (operator @ w.values.ravel()).reshape(domain.shape)

    mask = np.zeros(domain.shape, dtype=bool)
    mask[1:-1, 1:-1] = True
    mask &= (domain.x > 0) & (domain.x < epsilon)
    nodes = [tuple(int(k) for k in node) for node in np.argwhere(mask)]
    return applied[mask], nodes
