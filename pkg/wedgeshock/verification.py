#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.verification
~~~~~~~~~~~~~~~~~~~~~~~

Checks run on a computed solution. Every check returns a
:py:class:`Check` verdict instead of raising, so a report always lists
all of them.

Grid-dependent checks default to the tolerance ``max(1e-8, 10 h^2)``
where ``h`` is the longest grid edge; every check takes an explicit
``tolerance`` too.
"""
import math
import logging

import numpy as np

from wedgeshock.gas import PseudoState
from wedgeshock.gas import density
from wedgeshock.gas import rh_residual
from wedgeshock.gas import entropy_check
from wedgeshock.gas import ellipticity_margin
from wedgeshock.errors import WedgeShockError
from wedgeshock.states import regime_bounds
from wedgeshock.states import background_potentials
from wedgeshock.assembly import shock_normal
from wedgeshock.assembly import assemble_coefficients
from wedgeshock.solver import barrier_tolerance

logger = logging.getLogger(__name__)


class Check(object):
    """one named verdict

    :param value: the measured quantity compared against ``threshold``
    :param location: worst node ``(i, j)`` or point, when meaningful
    :param diagnostic: reported only, never fails a battery
    """

    def __init__(self, name, passed, value, threshold, location=None, detail=None, diagnostic=False):
        self.name = name
        self.passed = bool(passed)
        self.value = float(value)
        self.threshold = float(threshold)
        self.location = location
        self.detail = dict(detail or {})
        self.diagnostic = diagnostic

    def __repr__(self):
        return "Check({0}, {1}, value={2:.3e}, threshold={3:.3e})".format(
            self.name, self.verdict, self.value, self.threshold
        )

    @property
    def verdict(self):
        if self.diagnostic:
            return "reported"
        return "pass" if self.passed else "fail"

    def as_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict,
            "value": self.value,
            "threshold": self.threshold,
            "location": None if self.location is None else list(self.location),
            "detail": self.detail,
        }


class VerificationReport(object):
    def __init__(self, checks):
        self.checks = list(checks)

    def __repr__(self):
        return "VerificationReport({0}/{1} passed)".format(
            sum(1 for c in self.checks if c.passed or c.diagnostic), len(self.checks)
        )

    def __iter__(self):
        return iter(self.checks)

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @property
    def passed(self):
        return all(check.passed for check in self.checks if not check.diagnostic)

    @property
    def failures(self):
        return [check.name for check in self.checks if not check.diagnostic and not check.passed]

    def as_dict(self):
        return {
            "passed": self.passed,
            "checks": [check.as_dict() for check in self.checks],
        }


def _tolerance(solution, tolerance):
    return barrier_tolerance(solution.domain) if tolerance is None else float(tolerance)


def _worst(values, mask):
    masked = np.where(mask, values, -np.inf)
    node = np.unravel_index(np.argmax(masked), masked.shape)
    return float(masked[node]), tuple(int(k) for k in node)


def _radial_derivative(solution):
    """``psi_x = -psi_r`` at every node (0 at the origin)"""
    domain = solution.domain
    gradient = solution.psi.gradient()
    r = np.hypot(domain.xi, domain.eta)
    with np.errstate(divide="ignore", invalid="ignore"):
        psi_r = np.where(r > 0, (domain.xi * gradient[0] + domain.eta * gradient[1]) / r, 0.0)
    return -psi_r


def check_cutoff_inactive(solution, tolerance=None):
    """``|psi_x| <= 4x / (3 (gamma + 1))`` where ``x < 4 eps``, and no node
    of the zero-viscosity assembly had its cutoff engaged beyond tolerance"""
    tolerance = _tolerance(solution, tolerance)
    domain = solution.domain
    gamma = solution.gas.gamma
    epsilon = solution.config.epsilon
    strip = (domain.x >= 0) & (domain.x < 4.0 * epsilon)
    excess = np.abs(_radial_derivative(solution)) - 4.0 * np.maximum(domain.x, 0.0) / (3.0 * (gamma + 1.0))
    value, node = _worst(excess, strip)

    coeffs = assemble_coefficients(domain, solution.state2, solution.psi, solution.psi, epsilon, 0.0)
    engaged = int(np.count_nonzero(coeffs.cutoff_active & strip & (excess > tolerance)))
    return Check(
        "cutoff_inactive", value <= tolerance and engaged == 0, value, tolerance, node,
        {"cutoff_active_nodes": engaged},
    )


def check_quadratic_sonic_bound(solution, tolerance=None):
    """``0 <= psi <= 3 x^2 / (5 (gamma + 1))`` where ``x < 2 eps``"""
    tolerance = _tolerance(solution, tolerance)
    domain = solution.domain
    gamma = solution.gas.gamma
    strip = (domain.x >= 0) & (domain.x < 2.0 * solution.config.epsilon)
    psi = solution.psi.values
    bound = 3.0 * np.maximum(domain.x, 0.0) ** 2 / (5.0 * (gamma + 1.0))
    violation = np.maximum(psi - bound, -psi)
    value, node = _worst(violation, strip)
    return Check("quadratic_sonic_bound", value <= tolerance, value, tolerance, node)


def check_monotone_eta(solution, tolerance=None):
    """``psi_eta <= 0`` over the whole grid"""
    tolerance = _tolerance(solution, tolerance)
    psi_eta = solution.psi.gradient()[1]
    value, node = _worst(psi_eta, np.ones(psi_eta.shape, dtype=bool))
    return Check("monotone_eta", value <= tolerance, value, tolerance, node)


def check_nonnegative(solution, tolerance=None):
    """``psi >= 0`` up to tolerance; reports ``max psi / sigma``"""
    tolerance = _tolerance(solution, tolerance)
    psi = solution.psi.values
    value, node = _worst(-psi, np.ones(psi.shape, dtype=bool))
    sigma = solution.state2.sigma
    constant = solution.psi.max() / sigma if sigma > 0 else 0.0
    return Check("nonnegative", value <= tolerance, value, tolerance, node, {"upper_constant": constant})


def check_shock_conditions(solution, tolerance=None):
    """continuity of the pseudo-potential, the mass flux balance and the
    entropy condition at every free-boundary node"""
    tolerance = _tolerance(solution, tolerance)
    domain = solution.domain
    state2 = solution.state2
    gas = solution.gas
    j = domain.shape[1] - 1
    xi = domain.xi[:, j]
    eta = domain.eta[:, j]
    gradient = solution.psi.gradient()
    psi = solution.psi.values[:, j]

    _, phi1, phi2 = background_potentials(state2, xi, eta)
    inside = PseudoState(phi2.potential + psi, (phi2.grad[0] + gradient[0][:, j], phi2.grad[1] + gradient[1][:, j]))
    continuity = np.abs(inside.potential - phi1.potential)

    slopes = np.atleast_1d(solution.fb.derivative(eta))
    mass = np.zeros(len(xi))
    entropy = np.ones(len(xi), dtype=bool)
    for i in range(len(xi)):
        normal = shock_normal(float(slopes[i]))
        upstream = PseudoState(phi1.potential[i], (phi1.grad[0][i], phi1.grad[1][i]))
        downstream = PseudoState(inside.potential[i], (inside.grad[0][i], inside.grad[1][i]))
        mass[i] = abs(rh_residual(gas, upstream, downstream, normal))
        entropy[i] = entropy_check(density(gas, upstream), density(gas, downstream))

    worst_continuity = int(np.argmax(continuity))
    worst_mass = int(np.argmax(mass))
    value = max(float(continuity[worst_continuity]), float(mass[worst_mass]))
    worst = worst_continuity if continuity[worst_continuity] >= mass[worst_mass] else worst_mass
    passed = value <= tolerance and bool(np.all(entropy))
    return Check(
        "shock_conditions", passed, value, tolerance, (worst, j), {
            "continuity": float(continuity[worst_continuity]),
            "mass_flux": float(mass[worst_mass]),
            "entropy_failures": int(np.count_nonzero(~entropy)),
        },
    )


def check_ellipticity_and_sonic_match(solution, tolerance=None):
    """the equation is elliptic at every interior node off the sonic arc,
    and ``|D psi| / x`` stays finite next to it"""
    domain = solution.domain
    gradient = solution.psi.gradient()
    _, _, phi2 = background_potentials(solution.state2, domain.xi, domain.eta)
    state = PseudoState(phi2.potential + solution.psi.values, (phi2.grad[0] + gradient[0], phi2.grad[1] + gradient[1]))
    margin = ellipticity_margin(solution.gas, state)

    interior = np.zeros(domain.shape, dtype=bool)
    interior[1:-1, 1:-1] = True
    interior &= domain.x > 0
    lowest, node = _worst(-margin, interior)
    lowest = -lowest

    near = interior & (domain.x < 2.0 * solution.config.epsilon)
    ratio = 0.0
    if np.any(near):
        ratio = float(np.max(np.hypot(gradient[0], gradient[1])[near] / domain.x[near]))
    return Check(
        "ellipticity_and_sonic_match", lowest > 0 and math.isfinite(ratio), lowest, 0.0, node,
        {"gradient_over_x": ratio},
    )


def check_state_two(solution, tolerance=1e-10):
    """the von Neumann system, the Bernoulli law and the shock relation
    of state (2), the slip condition on the wedge and the ordering of
    the shock abscissae"""
    state2 = solution.state2
    gas = solution.gas
    jump = gas.u1 - state2.u2
    scale = max(1.0, gas.xi0)

    residual = float(np.max(np.abs(state2.residual())))
    probe = (0.5 * state2.xihat, 0.25 * state2.c2)
    _, _, phi2 = background_potentials(state2, probe[0], probe[1])
    bernoulli = abs(
        state2.rho2 ** (gas.gamma - 1.0) + 0.5 * phi2.speed_squared + phi2.potential
        - gas.bernoulli_constant
    )
    shock = abs(
        state2.rho2 * state2.xihat
        - gas.rho1 * (state2.xihat - (jump ** 2 + state2.v2 ** 2) / jump)
    )
    slip = abs(state2.v2 - state2.u2 * math.tan(state2.theta_w)) if state2.sigma > 0 else 0.0
    ordered = -state2.c2 < state2.xitilde <= state2.xihat <= state2.xi1 < 0

    value = max(residual, float(bernoulli), shock, slip)
    return Check(
        "state_two", value <= tolerance * scale and ordered, value, tolerance * scale, None, {
            "von_neumann": residual,
            "bernoulli": float(bernoulli),
            "shock_relation": shock,
            "slip": slip,
            "ordered": ordered,
        },
    )


def check_shock_ordering(solution, tolerance=None):
    """``f >= l`` at every sample and the slope at ``P1`` matches the
    straight shock to first order in the sample spacing"""
    tolerance = _tolerance(solution, tolerance)
    fb = solution.fb
    deficit = fb.deficit(solution.state2)
    spacing = float(np.max(np.diff(fb.eta)))
    slope_tolerance = max(1e-8, 10.0 * spacing)
    mismatch = abs(fb.end_slope_mismatch())
    passed = deficit <= tolerance and mismatch <= slope_tolerance
    return Check(
        "shock_ordering", passed, deficit, tolerance, None,
        {"end_slope_mismatch": mismatch, "end_slope_tolerance": slope_tolerance},
    )


def check_bernoulli_box(solution):
    """``|psi| + |D psi|`` against the radius in which the shock
    condition was rewritten; reported, never failing"""
    bounds = regime_bounds(solution.state2)
    gradient = solution.psi.gradient()
    size = float(np.max(np.abs(solution.psi.values)) + np.max(np.hypot(gradient[0], gradient[1])))
    return Check(
        "bernoulli_box", size <= bounds["delta_star"], size, bounds["delta_star"],
        detail={k: v for k, v in bounds.items() if k != "delta_star"}, diagnostic=True,
    )


CHECKS = (
    check_state_two,
    check_nonnegative,
    check_cutoff_inactive,
    check_quadratic_sonic_bound,
    check_monotone_eta,
    check_shock_conditions,
    check_shock_ordering,
    check_ellipticity_and_sonic_match,
)


def run_battery(solution, tolerance=None):
    """every check on one solution, in a fixed order"""
    checks = []
    for check in CHECKS + (check_bernoulli_box,):
        name = check.__name__[len("check_"):]
        try:
            if check in (check_state_two, check_ellipticity_and_sonic_match, check_bernoulli_box):
                checks.append(check(solution))
            else:
                checks.append(check(solution, tolerance))
        except WedgeShockError as e:
            logger.warning("check %s raised %s: %s", name, type(e).__name__, e)
            checks.append(Check(name, False, float("nan"), float("nan"), detail={"error": str(e)}))

    report = VerificationReport(checks)
    for check in checks:
        log = logger.info if check.passed or check.diagnostic else logger.warning
        log("check %s: %s (%.3e vs %.3e)", check.name, check.verdict, check.value, check.threshold)
    return report


def normal_potential(gas, normal, xi, eta):
    """the pseudo-potential of normal reflection, original coordinates"""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    half_r2 = 0.5 * (xi ** 2 + eta ** 2)
    behind = -half_r2 + gas.u1 * (normal.xibar - gas.xi0)
    state1 = -half_r2 + gas.u1 * (xi - gas.xi0)
    state0 = -half_r2
    return np.where(xi > gas.xi0, state0, np.where(xi < normal.xibar, state1, behind))


def w11_distance(solution, samples=129):
    """``integral |D(phi - phi_normal)|`` over the window
    ``[-c2bar/2, 0] x [0, c2bar/2]`` of original coordinates, by
    midpoint differences on a ``samples x samples`` node grid"""
    normal = solution.normal
    half = 0.5 * normal.c2bar
    axis_xi = np.linspace(-half, 0.0, samples)
    axis_eta = np.linspace(0.0, half, samples)
    xi, eta = np.meshgrid(axis_xi, axis_eta, indexing="ij")
    difference = solution.potential_at(xi, eta, frame="original") - normal_potential(
        solution.gas, normal, xi, eta
    )
    h_xi = axis_xi[1] - axis_xi[0]
    h_eta = axis_eta[1] - axis_eta[0]
    d_xi = (difference[1:, 1:] + difference[1:, :-1] - difference[:-1, 1:] - difference[:-1, :-1]) / (2 * h_xi)
    d_eta = (difference[1:, 1:] + difference[:-1, 1:] - difference[1:, :-1] - difference[:-1, :-1]) / (2 * h_eta)
    return float(np.nansum(np.hypot(d_xi, d_eta)) * h_xi * h_eta)


def shock_distance(solution):
    """``sup |f - xibar|`` over the free boundary, original coordinates"""
    state2 = solution.state2
    return float(np.max(np.abs(solution.fb.xi + state2.u2 - solution.normal.xibar)))


def corner_distance(solution):
    """distance from ``P1`` (original coordinates) to its normal-reflection limit"""
    state2 = solution.state2
    normal = solution.normal
    return float(math.hypot(
        state2.xi1 + state2.u2 - normal.xibar,
        state2.eta1 + state2.v2 - normal.eta_sonic,
    ))


class ConvergenceTable(object):
    """one row per wedge angle, largest ``sigma`` first"""

    columns = ("sigma", "shock_distance", "w11_distance", "corner_distance", "iterations", "shock_ratio")

    def __init__(self, rows):
        self.rows = rows

    def __repr__(self):
        return "ConvergenceTable({0} rows, passed={1})".format(len(self.rows), self.passed)

    def __len__(self):
        return len(self.rows)

    @property
    def monotone(self):
        shocks = [row["shock_distance"] for row in self.rows]
        windows = [row["w11_distance"] for row in self.rows]
        return all(a > b for a, b in zip(shocks, shocks[1:])) and \
            all(a > b for a, b in zip(windows, windows[1:]))

    @property
    def ratios_ok(self):
        for row in self.rows:
            ratio = row["shock_ratio"]
            if ratio is not None and not 1.5 <= ratio <= 2.5:
                return False
        return True

    @property
    def passed(self):
        return self.monotone and self.ratios_ok

    def array(self):
        return np.array([
            [row[c] if row[c] is not None else np.nan for c in self.columns]
            for row in self.rows
        ], dtype=float).reshape(len(self.rows), len(self.columns))

    def as_dict(self):
        return {"rows": list(self.rows), "monotone": self.monotone, "ratios_ok": self.ratios_ok}


def convergence_table(solutions, samples=129):
    """builds the table from already computed solutions"""
    ordered = sorted(solutions, key=lambda s: -s.state2.sigma)
    rows = []
    previous = None
    for solution in ordered:
        row = {
            "sigma": solution.state2.sigma,
            "shock_distance": shock_distance(solution),
            "w11_distance": w11_distance(solution, samples),
            "corner_distance": corner_distance(solution),
            "iterations": solution.iterations,
            "shock_ratio": None,
        }
        halved = previous is not None and row["sigma"] > 0 and \
            math.isclose(previous["sigma"] / row["sigma"], 2.0, rel_tol=1e-6)
        if halved and row["shock_distance"] > 0:
            row["shock_ratio"] = previous["shock_distance"] / row["shock_distance"]
        rows.append(row)
        previous = row
        logger.info(
            "sigma=%.6g: sup|f - xibar| = %.4e, W11 window = %.4e",
            row["sigma"], row["shock_distance"], row["w11_distance"],
        )
    return ConvergenceTable(rows)


def normal_reflection_limit(gas, sigmas, samples=129, **overrides):
    """runs the free-boundary iteration for each ``sigma`` and tabulates
    how far each solution is from normal reflection

    :param overrides: :py:class:`~wedgeshock.iteration.IterationConfig` entries
    """
    from wedgeshock.states import normal_reflection
    from wedgeshock.iteration import IterationConfig
    from wedgeshock.iteration import run_to_fixed_point

    normal = normal_reflection(gas)
    solutions = []
    for sigma in sorted(set(sigmas), reverse=True):
        config = IterationConfig.defaults(normal, sigma, **dict(overrides))
        solutions.append(run_to_fixed_point(gas, 0.5 * math.pi - sigma, config, verify=False))
    return convergence_table(solutions, samples)
