#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.iteration
~~~~~~~~~~~~~~~~~~~~

The outer free-boundary iteration: solve on the current domain, move
the shock to where the solution puts it, regrid, repeat.
"""
import math
import logging

import numpy as np

from wedgeshock.gas import incident_shock
from wedgeshock.errors import InvariantViolated
from wedgeshock.errors import MaxOuterExceeded
from wedgeshock.states import SIGMA_MAX
from wedgeshock.states import state2_solve
from wedgeshock.states import normal_reflection
from wedgeshock.states import background_potentials
from wedgeshock.solver import MAX_PICARD
from wedgeshock.solver import PICARD_TOLERANCE
from wedgeshock.solver import PICARD_RELAX_AFTER
from wedgeshock.solver import delta_schedule
from wedgeshock.solver import solve_nonlinear_bvp
from wedgeshock.assembly import OBLIQUENESS_FRACTION
from wedgeshock.assembly import rh_linearization
from wedgeshock.geometry import SHOCK
from wedgeshock.geometry import DEFAULT_ALPHA
from wedgeshock.geometry import ScalarField
from wedgeshock.geometry import FreeBoundaryCurve
from wedgeshock.geometry import build_domain
from wedgeshock.geometry import discrete_norms
from wedgeshock.geometry import extract_free_boundary

STATE0 = 0
STATE1 = 1
STATE2 = 2
SUBSONIC = 3
OUTSIDE = -1

logger = logging.getLogger(__name__)


class IterationConfig(object):
    """numerical parameters of one run

    use :py:meth:`IterationConfig.defaults` to fill the geometry-scaled
    entries (``epsilon``, ``tol_fb``) from the normal reflection.
    """

    def __init__(self, sigma, epsilon, resolution=(64, 64), schedule=None, relaxation=0.7,
                 tol_fb=1e-8, max_outer=100, tol_picard=PICARD_TOLERANCE, max_picard=MAX_PICARD,
                 relax_after=PICARD_RELAX_AFTER, obliqueness_fraction=OBLIQUENESS_FRACTION,
                 alpha=DEFAULT_ALPHA, sigma_max=SIGMA_MAX):
        self.sigma = float(sigma)
        self.epsilon = float(epsilon)
        self.resolution = tuple(int(n) for n in resolution)
        self.schedule = delta_schedule() if schedule is None else [float(d) for d in schedule]
        self.relaxation = float(relaxation)
        self.tol_fb = float(tol_fb)
        self.max_outer = int(max_outer)
        self.tol_picard = float(tol_picard)
        self.max_picard = int(max_picard)
        self.relax_after = int(relax_after)
        self.obliqueness_fraction = float(obliqueness_fraction)
        self.alpha = float(alpha)
        self.sigma_max = float(sigma_max)
        self.validate()

    def __repr__(self):
        return "IterationConfig(sigma={0!r}, resolution={1!r}, relaxation={2!r})".format(
            self.sigma, self.resolution, self.relaxation
        )

    @classmethod
    def defaults(cls, normal, sigma, **overrides):
        """``epsilon = 0.1 (c2bar - |xibar|)`` and ``tol_fb = 1e-8 c2bar``
        unless overridden"""
        if overrides.get("epsilon") is None:
            overrides["epsilon"] = 0.1 * (normal.c2bar - abs(normal.xibar))
        if overrides.get("tol_fb") is None:
            overrides["tol_fb"] = 1e-8 * normal.c2bar
        return cls(sigma, **overrides)

    @property
    def theta_w(self):
        return 0.5 * math.pi - self.sigma

    def validate(self):
        if not 0.0 < self.relaxation <= 1.0:
            raise InvariantViolated(self, "0 < relaxation <= 1")
        if not self.tol_fb > 0:
            raise InvariantViolated(self, "tol_fb > 0")
        if not self.epsilon > 0:
            raise InvariantViolated(self, "epsilon > 0")
        if not self.sigma >= 0:
            raise InvariantViolated(self, "sigma >= 0")
        return self

    def to_dict(self):
        return {
            "sigma": self.sigma,
            "epsilon": self.epsilon,
            "resolution": list(self.resolution),
            "schedule": list(self.schedule),
            "relaxation": self.relaxation,
            "tol_fb": self.tol_fb,
            "max_outer": self.max_outer,
            "tol_picard": self.tol_picard,
            "max_picard": self.max_picard,
            "relax_after": self.relax_after,
            "obliqueness_fraction": self.obliqueness_fraction,
            "alpha": self.alpha,
            "sigma_max": self.sigma_max,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        sigma = data.pop("sigma")
        return cls(sigma, **data)


class ReflectionSolution(object):
    """a converged (or last) iterate of the free-boundary iteration"""

    def __init__(self, gas, state2, config, fb, domain, psi, reports=None, residuals=None,
                 converged=False, diagnostics=None):
        self.gas = gas
        self.state2 = state2
        self.normal = state2.normal
        self.config = config
        self.fb = fb
        self.domain = domain
        self.psi = psi
        self.reports = list(reports or [])
        self.residuals = list(residuals or [])
        self.converged = converged
        self.diagnostics = dict(diagnostics or {})
        self.verification = None

    def __repr__(self):
        return "ReflectionSolution(sigma={0!r}, iterations={1}, converged={2})".format(
            self.state2.sigma, self.iterations, self.converged
        )

    @property
    def iterations(self):
        return len(self.residuals)

    @property
    def residual(self):
        return self.residuals[-1] if self.residuals else 0.0

    def phi(self):
        """``phi2 + psi`` at the nodes, shifted coordinates"""
        _, _, phi2 = background_potentials(self.state2, self.domain.xi, self.domain.eta)
        return ScalarField(self.domain, phi2.potential + self.psi.values)

    def with_psi(self, values):
        """a copy carrying other ``psi`` values on the same grid"""
        copy = ReflectionSolution(
            self.gas, self.state2, self.config, self.fb, self.domain,
            self.psi.with_values(values), self.reports, self.residuals,
            self.converged, self.diagnostics,
        )
        return copy

    def shock_position(self, eta):
        """the whole reflected shock in shifted coordinates: the free
        boundary below ``eta1``, the straight shock above"""
        eta = np.asarray(eta, dtype=float)
        curved = eta <= self.state2.eta1
        low = np.clip(eta, self.fb.eta[0], self.fb.eta[-1])
        return np.where(curved, self.fb(low), self.state2.reference_shock(eta))

    def labels(self, xi, eta):
        """which state occupies each shifted point; :py:data:`OUTSIDE`
        beyond the wedge or below the symmetry line"""
        state2 = self.state2
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        xi_o = xi + state2.u2
        eta_o = eta + state2.v2
        labels = np.full(xi.shape, STATE2, dtype=int)

        shock = self.shock_position(eta)
        below_p0 = eta <= state2.P0[1]
        labels[(xi < shock) & below_p0] = STATE1
        labels[(~below_p0) & (xi_o <= self.gas.xi0)] = STATE1
        labels[xi_o > self.gas.xi0] = STATE0
        inside = (labels == STATE2) & (np.hypot(xi, eta) < state2.c2)
        labels[inside] = SUBSONIC

        wedge = eta_o * math.cos(state2.theta_w) - xi_o * math.sin(state2.theta_w)
        labels[(wedge < -1e-14) | (eta_o < 0)] = OUTSIDE
        return labels

    def potential_at(self, xi, eta, frame="shifted"):
        """the global pseudo-potential; ``frame`` says whether ``(xi, eta)``
        are shifted or original coordinates (the value is the same
        either way). ``nan`` outside the wedge domain."""
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        if frame == "original":
            xi = xi - self.state2.u2
            eta = eta - self.state2.v2
        elif frame != "shifted":
            raise ValueError("unknown frame {0!r}".format(frame))

        labels = self.labels(xi, eta)
        phi0, phi1, phi2 = background_potentials(self.state2, xi, eta)
        phi = np.full(xi.shape, np.nan)
        phi = np.where(labels == STATE0, phi0.potential, phi)
        phi = np.where(labels == STATE1, phi1.potential, phi)
        phi = np.where(labels == STATE2, phi2.potential, phi)
        subsonic = labels == SUBSONIC
        if np.any(subsonic):
            phi[subsonic] = phi2.potential[subsonic] + self.psi.sample(xi[subsonic], eta[subsonic])
        return phi

    def to_dict(self):
        return {
            "gas": self.gas.to_dict(),
            "state2": self.state2.to_dict(),
            "config": self.config.to_dict(),
            "fb": self.fb.to_dict(),
            "psi": {"shape": list(self.psi.values.shape), "values": self.psi.values.ravel().tolist()},
            "residuals": list(self.residuals),
            "converged": self.converged,
            "reports": [r.to_dict() for r in self.reports],
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, data):
        """rebuilds the state, the grid and the field from
        :py:meth:`to_dict` output"""
        gas_data = data["gas"]
        gas = incident_shock(gas_data["gamma"], gas_data["rho0"], gas_data["rho1"])
        config = IterationConfig.from_dict(data["config"])
        state2 = state2_solve(gas, config.theta_w, config.sigma_max)
        fb = FreeBoundaryCurve.from_dict(data["fb"])
        domain = build_domain(state2, fb, config.resolution, config.epsilon)
        values = np.array(data["psi"]["values"], dtype=float).reshape(data["psi"]["shape"])
        return cls(
            gas, state2, config, fb, domain, ScalarField(domain, values),
            residuals=data.get("residuals"), converged=data.get("converged", False),
            diagnostics=data.get("diagnostics"),
        )


def outer_step(state2, fb, psi, config, reports=None):
    """one pass of the outer map: build the domain of ``fb``, solve with
    ``psi`` frozen in the coefficients, read the shock off the solution,
    relax towards it and carry the solution over to the new domain

    :param psi: :py:class:`~wedgeshock.geometry.ScalarField` or ``None`` for ``psi = 0``
    :param reports: list receiving the :py:class:`~wedgeshock.solver.SolveReport`
    :returns: ``(new fb, new psi)``
    """
    domain = build_domain(state2, fb, config.resolution, config.epsilon)
    phi = ScalarField.zeros(domain) if psi is None else psi.regrid(domain)
    solved, report = solve_nonlinear_bvp(
        domain, state2, phi, config.epsilon, config.schedule,
        config.tol_picard, config.max_picard, config.relax_after,
        config.obliqueness_fraction,
    )
    if reports is not None:
        reports.append(report)

    extracted = extract_free_boundary(domain, solved, state2)
    current = fb
    if not np.array_equal(fb.eta, extracted.eta):
        current = FreeBoundaryCurve(extracted.eta, fb(extracted.eta), fb.end_slope)
    xi = (1.0 - config.relaxation) * current.xi + config.relaxation * extracted.xi
    xi[-1] = state2.xi1
    relaxed = current.with_xi(xi)

    if np.array_equal(relaxed.xi, current.xi):
        return current, solved
    new_domain = build_domain(state2, relaxed, config.resolution, config.epsilon)
    return relaxed, solved.regrid(new_domain)


def run_to_fixed_point(gas, theta_w, config=None, verify=True, observer=None):
    """iterates :py:func:`outer_step` from the straight shock and
    ``psi = 0`` until the shock moves less than ``config.tol_fb``, then
    runs the verification battery

    :param observer: optional callable receiving ``(step, fb, residual)``
      after every outer step

    :raises MaxOuterExceeded:
    """
    normal = normal_reflection(gas)
    sigma = 0.5 * math.pi - theta_w
    config = config or IterationConfig.defaults(normal, sigma)
    state2 = state2_solve(gas, theta_w, config.sigma_max, normal)

    fb = FreeBoundaryCurve.straight(state2, config.resolution[0])
    psi = None
    reports = []
    residuals = []
    for step in range(1, config.max_outer + 1):
        new_fb, psi = outer_step(state2, fb, psi, config, reports)
        residual = new_fb.sup_distance(fb)
        residuals.append(residual)
        fb = new_fb
        if observer is not None:
            observer(step, fb, residual)
        logger.info("outer step %d: shock moved %.3e (tolerance %.1e)", step, residual, config.tol_fb)
        if residual <= config.tol_fb:
            break
    else:
        raise MaxOuterExceeded(config.max_outer, residuals[-1], config.tol_fb)

    solution = ReflectionSolution(
        gas, state2, config, fb, psi.domain, psi, reports, residuals, converged=True,
    )
    solution.diagnostics = measure(solution)
    logger.info(
        "fixed point after %d steps at sigma=%.6g: sup|f - l| = %.3e",
        solution.iterations, sigma, solution.diagnostics["shock_offset"],
    )

    if verify:
        from wedgeshock.verification import run_battery
        solution.verification = run_battery(solution)
    return solution


def shock_row_deviation(solution):
    """largest change of the shock-row coefficients between the iterate
    and ``psi = 0``, and that change over ``|Dpsi| + |psi| + sigma``"""
    domain = solution.domain
    state2 = solution.state2
    shock = domain.boundary == SHOCK
    gradient = solution.psi.gradient()
    values = solution.psi.values[shock]
    grad = (gradient[0][shock], gradient[1][shock])
    eta = domain.eta[shock]
    _, current = rh_linearization(state2, values, grad, eta)
    _, frozen = rh_linearization(state2, np.zeros_like(values), (np.zeros_like(values),) * 2, eta)
    deviation = float(max(np.max(np.abs(a - b)) for a, b in zip(current, frozen)))
    size = float(np.max(np.hypot(grad[0], grad[1]) + np.abs(values))) + state2.sigma
    return deviation, deviation / size if size > 0 else 0.0


def measure(solution):
    """diagnostic constants of a solution; nothing here is enforced"""
    state2 = solution.state2
    sigma = state2.sigma
    offset = float(np.max(np.abs(solution.fb.xi - state2.reference_shock(solution.fb.eta))))
    parabolic, weighted = discrete_norms(solution.domain, solution.psi, solution.config.alpha)
    epsilon = solution.config.epsilon
    diagnostics = {
        "shock_offset": offset,
        "shock_offset_constant": offset / sigma if sigma > 0 else 0.0,
        "parabolic_norm": parabolic,
        "weighted_norm": weighted,
        "weighted_norm_constant": weighted / sigma if sigma > 0 else 0.0,
        "psi_max": solution.psi.max(),
        "psi_min": solution.psi.min(),
        "spacing": solution.domain.spacing,
        "area": solution.domain.area,
    }
    scale = parabolic * epsilon ** (1.0 - solution.config.alpha) + weighted * sigma
    norm = float(np.max(np.abs(solution.psi.values)))
    diagnostics["norm_shape_constant"] = norm / scale if scale > 0 else 0.0
    deviation, constant = shock_row_deviation(solution)
    diagnostics["shock_row_deviation"] = deviation
    diagnostics["shock_row_constant"] = constant
    logger.debug("shock rows moved by %.3e from their psi = 0 form (%.3g per unit size)", deviation, constant)
    if solution.reports:
        diagnostics["barrier_constant"] = solution.reports[-1].barrier_constant
        diagnostics["sonic_constant"] = solution.reports[-1].sonic_constant
        diagnostics["viscous_fallback"] = any(r.viscous_fallback for r in solution.reports)
    logger.info(
        "norm estimates: parabolic %.4g, weighted %.4g, |psi| over their scale %.3g",
        parabolic, weighted, diagnostics["norm_shape_constant"],
    )
    return diagnostics


class GlobalField(object):
    """``phi`` sampled over the wedge domain in original coordinates"""

    def __init__(self, xi, eta, phi, labels, polyline, incident_jump, corner_slope_jump):
        self.xi = xi
        self.eta = eta
        self.phi = phi
        self.labels = labels
        self.polyline = polyline
        self.incident_jump = incident_jump
        self.corner_slope_jump = corner_slope_jump

    def __repr__(self):
        return "GlobalField({0}x{1})".format(*self.xi.shape)

    def table(self):
        """rows ``(xi, eta, phi, label)``"""
        return np.column_stack([
            self.xi.ravel(), self.eta.ravel(), self.phi.ravel(), self.labels.ravel(),
        ])


def shock_polyline(solution, count=None):
    """``(eta, xi)`` rows of the reflected shock in shifted coordinates:
    the free boundary from the symmetry line to ``P1`` followed by the
    straight shock up to the reflection point (capped at ``2 c2`` above
    ``P1`` when the reflection point is at infinity)"""
    state2 = solution.state2
    count = count or len(solution.fb)
    top = min(state2.P0[1], state2.eta1 + 2.0 * state2.c2)
    straight_eta = np.linspace(state2.eta1, top, count)[1:]
    eta = np.concatenate([solution.fb.eta, straight_eta])
    xi = np.concatenate([solution.fb.xi, state2.reference_shock(straight_eta)])
    return np.column_stack([eta, xi])


def assemble_global(solution, samples=129):
    """samples the composite solution on a ``samples x samples`` grid of
    the wedge domain (original coordinates) and builds the shock polyline
    """
    state2 = solution.state2
    gas = solution.gas
    c2 = state2.c2
    top = min(state2.P0[1] + state2.v2, 2.0 * c2) + 0.5 * c2
    xi_axis = np.linspace(state2.u2 - 1.5 * c2, gas.xi0 + 0.5 * c2, samples)
    eta_axis = np.linspace(0.0, top, samples)
    xi, eta = np.meshgrid(xi_axis, eta_axis, indexing="ij")
    phi = solution.potential_at(xi, eta, frame="original")
    labels = solution.labels(xi - state2.u2, eta - state2.v2)

    probe = np.linspace(0.0, top, 16)
    state0, state1 = gas.incident_states(np.full(probe.shape, gas.xi0), probe)
    incident_jump = float(np.max(np.abs(state0.potential - state1.potential)))

    fb = solution.fb
    below = (fb.xi[-1] - fb.xi[-2]) / (fb.eta[-1] - fb.eta[-2])
    corner_slope_jump = float(abs(below - state2.cot_s))

    return GlobalField(
        xi, eta, phi, labels, shock_polyline(solution), incident_jump, corner_slope_jump,
    )
