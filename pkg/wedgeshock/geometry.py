#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.geometry
~~~~~~~~~~~~~~~~~~~

Sonic-frame coordinates, the free boundary curve, the boundary-fitted
grid of the elliptic region and grid functions living on it.

All points are in coordinates shifted by the velocity of state (2).
The region is bounded by the sonic arc (``P4 -> P1``), the free
boundary (``P1 -> P2``), the symmetry line ``eta = -v2`` (``P2 -> P3``)
and the wedge (``P3 -> P4``).

The grid is a transfinite (Coons) patch over the logical square
``(a, b)``: ``a`` runs from the sonic arc (``a = 0``) to the symmetry
line (``a = 1``) and ``b`` from the wedge (``b = 0``) to the free
boundary (``b = 1``).
"""
import math
import logging

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.interpolate import PchipInterpolator
from scipy.interpolate import LinearNDInterpolator
from scipy.interpolate import NearestNDInterpolator

from wedgeshock.errors import MeshFold
from wedgeshock.errors import NonMonotone
from wedgeshock.errors import ArcsineDomain
from wedgeshock.errors import OriginSingularity
from wedgeshock.errors import InvariantViolated

MIN_RESOLUTION = 8
FOLD_TOLERANCE = 1e-8
DEFAULT_ALPHA = 0.25
HOLDER_SAMPLE_CAP = 1500

INTERIOR = 0
SONIC = 1
SHOCK = 2
WEDGE = 3
SYMMETRY = 4
BOUNDARY_NAMES = {
    INTERIOR: "interior",
    SONIC: "sonic",
    SHOCK: "shock",
    WEDGE: "wedge",
    SYMMETRY: "symmetry",
}

REGION_INNER = 0
REGION_OVERLAP = 1
REGION_BLEND = 2
REGION_OUTER = 3
REGION_NAMES = {
    REGION_INNER: "inner",
    REGION_OVERLAP: "overlap",
    REGION_BLEND: "blend",
    REGION_OUTER: "outer",
}

logger = logging.getLogger(__name__)


class SonicFrame(object):
    """``(xi, eta) -> (x, y) = (c2 - r, theta - theta_w)``"""

    def __init__(self, c2, theta_w):
        if not c2 > 0:
            raise InvariantViolated("SonicFrame", "c2 > 0", repr(c2))
        self.c2 = float(c2)
        self.theta_w = float(theta_w)

    def __repr__(self):
        return "SonicFrame(c2={0!r}, theta_w={1!r})".format(self.c2, self.theta_w)

    def forward(self, xi, eta):
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        r = np.hypot(xi, eta)
        if np.any(r == 0.0):
            where = np.flatnonzero(r.ravel() == 0.0)[0]
            raise OriginSingularity((xi.ravel()[where], eta.ravel()[where]))
        x = self.c2 - r
        y = np.arctan2(eta, xi) - self.theta_w
        return _scalar_or_array(x), _scalar_or_array(y)

    def inverse(self, x, y):
        r = self.c2 - np.asarray(x, dtype=float)
        theta = np.asarray(y, dtype=float) + self.theta_w
        return _scalar_or_array(r * np.cos(theta)), _scalar_or_array(r * np.sin(theta))


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def to_sonic_frame(state2, point):
    """maps a shifted point ``(xi, eta)`` to ``(x, y)``

    :raises OriginSingularity: at ``r = 0``
    """
    return SonicFrame(state2.c2, state2.theta_w).forward(point[0], point[1])


def from_sonic_frame(state2, point):
    """inverse of :py:func:`to_sonic_frame`"""
    return SonicFrame(state2.c2, state2.theta_w).inverse(point[0], point[1])


def reference_shock(state2, eta):
    """the straight reflected shock ``xi = l(eta) = eta cot(theta_s) + xihat``"""
    result = state2.reference_shock(np.asarray(eta, dtype=float))
    return _scalar_or_array(result)


def sonic_reference_shock(state2, x):
    """the straight reflected shock written as ``y = f0(x)`` in the sonic frame

    :raises ArcsineDomain: where the shock does not reach radius ``c2 - x``
    """
    x = np.asarray(x, dtype=float)
    distance = abs(state2.xihat) * math.sin(state2.theta_s)
    radius = state2.c2 - x
    if np.any(distance > radius):
        raise ArcsineDomain(float(np.max(x)), state2.c2 - distance)
    y = np.arcsin(distance / radius) - state2.theta_w + state2.theta_s
    return _scalar_or_array(y)


class FreeBoundaryCurve(object):
    """the shock position ``xi = f(eta)`` sampled at ascending ``eta``
    from the symmetry line ``-v2`` to the sonic point ``eta1``.

    Between samples the curve is a cubic Hermite spline with monotone
    (PCHIP) slopes, except at ``eta1`` where the slope is clamped to
    ``end_slope`` so that the curve leaves ``P1`` tangent to the
    straight shock.
    """

    def __init__(self, eta, xi, end_slope):
        self.eta = np.array(eta, dtype=float)
        self.xi = np.array(xi, dtype=float)
        self.end_slope = float(end_slope)
        if self.eta.shape != self.xi.shape or self.eta.ndim != 1:
            raise InvariantViolated(self, "matching 1-d samples")
        if len(self.eta) < 3:
            raise InvariantViolated(self, "at least 3 samples")
        if np.any(np.diff(self.eta) <= 0):
            raise InvariantViolated(self, "ascending eta samples")

        slopes = PchipInterpolator(self.eta, self.xi).derivative()(self.eta)
        slopes[-1] = self.end_slope
        self._spline = CubicHermiteSpline(self.eta, self.xi, slopes)

    def __repr__(self):
        return "FreeBoundaryCurve({0} samples, eta=[{1:.6g}, {2:.6g}])".format(
            len(self.eta), self.eta[0], self.eta[-1]
        )

    def __len__(self):
        return len(self.eta)

    def __call__(self, eta):
        return _scalar_or_array(self._spline(eta))

    def derivative(self, eta):
        return _scalar_or_array(self._spline.derivative()(eta))

    @classmethod
    def straight(cls, state2, count):
        """the reference configuration ``f = l`` with ``count`` samples"""
        eta = shock_etas(state2, count)[::-1].copy()
        xi = state2.reference_shock(eta)
        xi[-1] = state2.xi1
        return cls(eta, xi, state2.cot_s)

    def with_xi(self, xi):
        return self.__class__(self.eta, xi, self.end_slope)

    def shifted(self, offset):
        """a parallel copy ``f + offset`` (the endpoint moves too)"""
        return self.with_xi(self.xi + offset)

    def relaxed(self, target, weight):
        """``(1 - weight) * self + weight * target`` sample by sample"""
        return self.with_xi((1.0 - weight) * self.xi + weight * target.xi)

    def sup_distance(self, other):
        return float(np.max(np.abs(self.xi - other.xi)))

    def deficit(self, state2):
        """largest ``l(eta) - f(eta)`` over the samples (``<= 0`` when ``f >= l``)"""
        return float(np.max(state2.reference_shock(self.eta) - self.xi))

    def end_slope_mismatch(self):
        """first divided difference at ``eta1`` minus the clamped end slope"""
        divided = (self.xi[-1] - self.xi[-2]) / (self.eta[-1] - self.eta[-2])
        return float(divided - self.end_slope)

    def to_dict(self):
        return {
            "eta": self.eta.tolist(),
            "xi": self.xi.tolist(),
            "end_slope": self.end_slope,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["eta"], data["xi"], data["end_slope"])


def _second_differences(u, da, db):
    """compact second differences in the interior, one-sided
    second-order ``numpy.gradient`` compositions on the edges"""
    u_a = np.gradient(u, da, axis=0, edge_order=2)
    u_b = np.gradient(u, db, axis=1, edge_order=2)
    u_aa = np.gradient(u_a, da, axis=0, edge_order=2)
    u_bb = np.gradient(u_b, db, axis=1, edge_order=2)
    u_ab = np.gradient(u_a, db, axis=1, edge_order=2)

    u_aa[1:-1, :] = (u[2:, :] - 2.0 * u[1:-1, :] + u[:-2, :]) / da ** 2
    u_bb[:, 1:-1] = (u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]) / db ** 2
    u_ab[1:-1, 1:-1] = (
        u[2:, 2:] - u[2:, :-2] - u[:-2, 2:] + u[:-2, :-2]
    ) / (4.0 * da * db)
    return u_aa, u_ab, u_bb


class GridMetrics(object):
    """derivatives of the logical-to-physical map of a structured grid

    * ``forward[m, k]``: ``d X_m / d a_k``
    * ``inverse[k, i]``: ``d a_k / d X_i``
    * ``hessian[k, i, j]``: ``d^2 a_k / d X_i d X_j``
    """

    def __init__(self, xi, eta, da, db):
        forward = np.empty((2, 2) + xi.shape)
        second = np.empty((2, 2, 2) + xi.shape)
        for m, coordinate in enumerate((xi, eta)):
            forward[m, 0] = np.gradient(coordinate, da, axis=0, edge_order=2)
            forward[m, 1] = np.gradient(coordinate, db, axis=1, edge_order=2)
            aa, ab, bb = _second_differences(coordinate, da, db)
            second[m, 0, 0] = aa
            second[m, 0, 1] = ab
            second[m, 1, 0] = ab
            second[m, 1, 1] = bb

        self.forward = forward
        self.determinant = forward[0, 0] * forward[1, 1] - forward[0, 1] * forward[1, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            inverse = np.empty_like(forward)
            inverse[0, 0] = forward[1, 1] / self.determinant
            inverse[0, 1] = -forward[0, 1] / self.determinant
            inverse[1, 0] = -forward[1, 0] / self.determinant
            inverse[1, 1] = forward[0, 0] / self.determinant
        self.inverse = inverse
        self.hessian = -np.einsum(
            "km...,mpq...,pi...,qj...->kij...", inverse, second, inverse, inverse
        )


class ReflectionDomain(object):
    """a structured curvilinear grid with boundary and region tags

    :param xi: ``(n_radial, n_angular)`` node abscissae
    :param eta: ``(n_radial, n_angular)`` node ordinates
    :param boundary: integer tags per node, defaults to the side tags
      of the logical square (see :py:func:`side_tags`)
    """

    def __init__(self, xi, eta, boundary=None, region=None, state2=None, fb=None, epsilon=None):
        self.xi = np.array(xi, dtype=float)
        self.eta = np.array(eta, dtype=float)
        if self.xi.shape != self.eta.shape or self.xi.ndim != 2:
            raise InvariantViolated(self, "matching 2-d node arrays")
        n_radial, n_angular = self.xi.shape
        if n_radial < 3 or n_angular < 3:
            raise InvariantViolated(self, "at least 3x3 nodes")

        self.shape = self.xi.shape
        self.a = np.linspace(0.0, 1.0, n_radial)
        self.b = np.linspace(0.0, 1.0, n_angular)
        self.da = self.a[1] - self.a[0]
        self.db = self.b[1] - self.b[0]
        self.state2 = state2
        self.fb = fb
        self.epsilon = epsilon
        self.boundary = side_tags(self.shape) if boundary is None else np.asarray(boundary)
        self.metrics = GridMetrics(self.xi, self.eta, self.da, self.db)
        self.cell_areas = _cell_areas(self.xi, self.eta)

        if state2 is not None:
            self.frame = SonicFrame(state2.c2, state2.theta_w)
            r = np.hypot(self.xi, self.eta)
            self.x = state2.c2 - r
            with np.errstate(invalid="ignore"):
                self.y = np.arctan2(self.eta, self.xi) - state2.theta_w
        else:
            self.frame = None
            self.x = None
            self.y = None

        if region is not None:
            self.region = np.asarray(region)
        elif self.x is not None and epsilon:
            self.region = region_tags(self.x, epsilon)
        else:
            self.region = np.full(self.shape, REGION_OUTER)

    def __repr__(self):
        return "ReflectionDomain({0}x{1}, area={2:.6g})".format(
            self.shape[0], self.shape[1], self.area
        )

    @classmethod
    def rectangle(cls, xlim, ylim, shape):
        """an axis-aligned grid; ``a`` runs along ``xi`` and ``b`` along ``eta``"""
        a = np.linspace(xlim[0], xlim[1], shape[0])
        b = np.linspace(ylim[0], ylim[1], shape[1])
        xi, eta = np.meshgrid(a, b, indexing="ij")
        return cls(xi, eta)

    @property
    def area(self):
        return float(np.sum(np.abs(self.cell_areas)))

    @property
    def spacing(self):
        """longest grid edge"""
        along_a = np.hypot(np.diff(self.xi, axis=0), np.diff(self.eta, axis=0))
        along_b = np.hypot(np.diff(self.xi, axis=1), np.diff(self.eta, axis=1))
        return float(max(along_a.max(), along_b.max()))

    def nodes(self, tag):
        """``(i, j)`` pairs of the nodes carrying a boundary tag, in row-major order"""
        return [tuple(int(k) for k in node) for node in np.argwhere(self.boundary == tag)]

    def shock_indices(self):
        """``(i, j)`` of the free-boundary nodes, from ``P1`` to ``P2``"""
        j = self.shape[1] - 1
        return [(i, j) for i in range(self.shape[0])]

    def points(self):
        return np.column_stack([self.xi.ravel(), self.eta.ravel()])

    def boundary_length(self):
        total = 0.0
        for xs, ys in (
            (self.xi[0, :], self.eta[0, :]),
            (self.xi[-1, :], self.eta[-1, :]),
            (self.xi[:, 0], self.eta[:, 0]),
            (self.xi[:, -1], self.eta[:, -1]),
        ):
            total += float(np.sum(np.hypot(np.diff(xs), np.diff(ys))))
        return total

    def grid_table(self):
        """rows ``(i, j, xi, eta, x, y, region_tag, boundary_tag)``"""
        i, j = np.meshgrid(
            np.arange(self.shape[0]), np.arange(self.shape[1]), indexing="ij"
        )
        x = self.x if self.x is not None else np.full(self.shape, np.nan)
        y = self.y if self.y is not None else np.full(self.shape, np.nan)
        return np.column_stack([
            i.ravel(), j.ravel(), self.xi.ravel(), self.eta.ravel(),
            x.ravel(), y.ravel(), self.region.ravel(), self.boundary.ravel(),
        ])

    def validate(self, tolerance=1e-12):
        """rejects folded or degenerate grids

        :raises MeshFold:
        """
        scale = max(self.area, np.finfo(float).tiny)
        signs = np.sign(self.cell_areas)
        if np.any(np.abs(self.cell_areas) <= tolerance * scale / self.cell_areas.size):
            worst = np.unravel_index(np.argmin(np.abs(self.cell_areas)), self.cell_areas.shape)
            raise MeshFold("degenerate cell", tuple(int(k) for k in worst))
        if not (np.all(signs > 0) or np.all(signs < 0)):
            flipped = np.argwhere(signs != signs.flat[0])[0]
            raise MeshFold("cell orientation flips", tuple(int(k) for k in flipped))

        determinant = self.metrics.determinant
        if not (np.all(determinant > 0) or np.all(determinant < 0)):
            raise MeshFold("non-uniform Jacobian sign")
        return self


def side_tags(shape):
    """boundary tags of the logical square; the sonic side owns both of
    its corners and the symmetry side owns the other two"""
    tags = np.full(shape, INTERIOR, dtype=int)
    tags[:, 0] = WEDGE
    tags[:, -1] = SHOCK
    tags[-1, :] = SYMMETRY
    tags[0, :] = SONIC
    return tags


def region_tags(x, epsilon):
    """inner strip ``x <= eps``, overlap ``eps < x < 2 eps``, blend
    ``2 eps <= x < 4 eps`` where the coefficients switch over, outer
    ``x >= 4 eps``"""
    region = np.full(np.shape(x), REGION_OUTER, dtype=int)
    region[x < 4.0 * epsilon] = REGION_BLEND
    region[x < 2.0 * epsilon] = REGION_OVERLAP
    region[x <= epsilon] = REGION_INNER
    return region


def _cell_areas(xi, eta):
    dx1 = xi[1:, 1:] - xi[:-1, :-1]
    dy1 = eta[1:, 1:] - eta[:-1, :-1]
    dx2 = xi[:-1, 1:] - xi[1:, :-1]
    dy2 = eta[:-1, 1:] - eta[1:, :-1]
    return 0.5 * (dx1 * dy2 - dx2 * dy1)


def shock_etas(state2, n_radial):
    """ordinates of the free-boundary nodes, from ``eta1`` down to ``-v2``"""
    a = np.linspace(0.0, 1.0, n_radial)
    etas = state2.eta1 + a * (-state2.v2 - state2.eta1)
    etas[0] = state2.eta1
    etas[-1] = -state2.v2
    return etas


def build_domain(state2, fb, resolution, epsilon):
    """builds the boundary-fitted grid of ``{xi > f(eta)}`` inside the
    sonic disc, to the left of the wedge and above the symmetry line

    :param resolution: ``(n_radial, n_angular)``, both ``>= 8``
    :raises MeshFold: when ``fb`` dips below the straight shock or the
      grid folds
    """
    n_radial, n_angular = (int(n) for n in resolution)
    if n_radial < MIN_RESOLUTION or n_angular < MIN_RESOLUTION:
        raise InvariantViolated(
            "build_domain", "resolution >= {0}".format(MIN_RESOLUTION), repr(resolution)
        )

    etas = shock_etas(state2, n_radial)
    if len(fb) == n_radial and np.array_equal(fb.eta, etas[::-1]):
        f = fb.xi[::-1].copy()
    else:
        f = np.asarray(fb(etas), dtype=float)

    tolerance = FOLD_TOLERANCE * state2.c2
    below = state2.reference_shock(etas) - f
    if np.any(below > tolerance):
        worst = int(np.argmax(below))
        raise MeshFold(
            "free boundary below the reflected shock by {0:.3e}".format(below[worst]),
            (float(f[worst]), float(etas[worst])),
        )
    if not np.all(np.isfinite(f)):
        raise MeshFold("non-finite free boundary samples")
    f[0] = state2.xi1

    a = np.linspace(0.0, 1.0, n_radial)[:, None]
    b = np.linspace(0.0, 1.0, n_angular)[None, :]

    P1 = np.array(state2.P1)
    P2 = np.array([f[-1], -state2.v2])
    P3 = np.array(state2.P3)
    P4 = np.array(state2.P4)
    theta1 = math.atan2(state2.eta1, state2.xi1)

    def corners(k):
        return (
            (1 - a) * (1 - b) * P4[k] + (1 - a) * b * P1[k]
            + a * (1 - b) * P3[k] + a * b * P2[k]
        )

    angles = state2.theta_w + b * (theta1 - state2.theta_w)
    arc = (state2.c2 * np.cos(angles), state2.c2 * np.sin(angles))
    arc[0][0, -1], arc[1][0, -1] = P1
    wedge = (P4[0] + a * (P3[0] - P4[0]), P4[1] + a * (P3[1] - P4[1]))
    shock = (f[:, None], etas[:, None])
    symmetry = (P3[0] + b * (P2[0] - P3[0]), P3[1] + b * (P2[1] - P3[1]))

    xi = (1 - b) * wedge[0] + b * shock[0] + (1 - a) * arc[0] + a * symmetry[0] - corners(0)
    eta = (1 - b) * wedge[1] + b * shock[1] + (1 - a) * arc[1] + a * symmetry[1] - corners(1)
    # boundary nodes exactly on their sides
    for k, nodes in enumerate((xi, eta)):
        nodes[:, 0] = wedge[k][:, 0]
        nodes[:, -1] = shock[k][:, 0]
        nodes[0, :] = arc[k][0, :]
        nodes[-1, :] = symmetry[k][0, :]

    domain = ReflectionDomain(xi, eta, state2=state2, fb=fb, epsilon=epsilon)
    domain.validate()
    logger.debug(
        "built %dx%d domain: area %.6g, spacing %.3e", n_radial, n_angular,
        domain.area, domain.spacing,
    )
    return domain


class ScalarField(object):
    """nodal values of a grid function on a :py:class:`ReflectionDomain`"""

    def __init__(self, domain, values):
        self.domain = domain
        self.values = np.array(values, dtype=float)
        if self.values.shape != domain.shape:
            raise InvariantViolated(
                "ScalarField", "values shaped like the grid",
                "{0} != {1}".format(self.values.shape, domain.shape),
            )

    def __repr__(self):
        return "ScalarField({0}x{1}, range=[{2:.3e}, {3:.3e}])".format(
            self.values.shape[0], self.values.shape[1], self.min(), self.max()
        )

    @classmethod
    def zeros(cls, domain):
        return cls(domain, np.zeros(domain.shape))

    @classmethod
    def from_function(cls, domain, function):
        return cls(domain, function(domain.xi, domain.eta))

    def min(self):
        return float(np.min(self.values))

    def max(self):
        return float(np.max(self.values))

    def logical_gradient(self):
        d = self.domain
        return (
            np.gradient(self.values, d.da, axis=0, edge_order=2),
            np.gradient(self.values, d.db, axis=1, edge_order=2),
        )

    def gradient(self):
        """``(psi_xi, psi_eta)`` by the chain rule through the grid map"""
        u_a, u_b = self.logical_gradient()
        K = self.domain.metrics.inverse
        return (u_a * K[0, 0] + u_b * K[1, 0], u_a * K[0, 1] + u_b * K[1, 1])

    def hessian(self):
        """``(psi_xixi, psi_xieta, psi_etaeta)``"""
        d = self.domain
        K = d.metrics.inverse
        H = d.metrics.hessian
        u_a, u_b = self.logical_gradient()
        u_aa, u_ab, u_bb = _second_differences(self.values, d.da, d.db)
        logical = ((u_aa, u_ab), (u_ab, u_bb))
        result = []
        for i, j in ((0, 0), (0, 1), (1, 1)):
            total = u_a * H[0, i, j] + u_b * H[1, i, j]
            for p in range(2):
                for q in range(2):
                    total = total + logical[p][q] * K[p, i] * K[q, j]
            result.append(total)
        return tuple(result)

    def sample(self, xi, eta):
        """linear interpolation over the node cloud, nearest-node
        values where a point falls outside the triangulation"""
        points = self.domain.points()
        values = self.values.ravel()
        query = np.column_stack([np.ravel(xi), np.ravel(eta)])
        result = LinearNDInterpolator(points, values)(query)
        missing = np.isnan(result)
        if np.any(missing):
            logger.debug("nearest-node fallback for %d of %d samples", int(missing.sum()), len(result))
            result[missing] = NearestNDInterpolator(points, values)(query[missing])
        return result.reshape(np.shape(xi))

    def regrid(self, domain):
        """this field carried over to another grid of the same region"""
        if domain is self.domain:
            return self
        if domain.shape == self.domain.shape and np.array_equal(domain.xi, self.domain.xi) \
                and np.array_equal(domain.eta, self.domain.eta):
            return ScalarField(domain, self.values)
        return ScalarField(domain, self.sample(domain.xi, domain.eta))

    def with_values(self, values):
        return ScalarField(self.domain, values)

    def on_shock(self):
        j = self.domain.shape[1] - 1
        return self.values[:, j].copy()


def extract_free_boundary(domain, psi, state2):
    """the shock position implied by ``psi`` through continuity of the
    pseudo-potential, ``xi = (psi + v2 eta) / (u1 - u2) + xihat``, at the
    current free-boundary nodes; ``P1`` stays pinned on the straight shock

    :raises NonMonotone: when the new curve leaves the disc, crosses the
      wedge or drops below the straight shock
    """
    jump = state2.gas.u1 - state2.u2
    if not jump > 0:
        raise InvariantViolated(state2, "u1 - u2 > 0")

    j = domain.shape[1] - 1
    etas = shock_etas(state2, domain.shape[0])
    xi = (psi.values[:, j] + state2.v2 * etas) / jump + state2.xihat
    xi[0] = state2.xi1

    reference = state2.reference_shock(etas)
    deficit = reference - xi
    tolerance = FOLD_TOLERANCE * state2.c2
    if np.any(deficit > tolerance):
        worst = int(np.argmax(deficit))
        raise NonMonotone(
            "curve below the reflected shock by {0:.3e}".format(deficit[worst]),
            float(etas[worst]),
        )
    clamped = deficit > 0
    if np.any(clamped):
        logger.debug("clamped %d shock samples onto the reflected shock", int(clamped.sum()))
        xi = np.where(clamped, reference, xi)

    outside = xi[1:] ** 2 + etas[1:] ** 2 - state2.c2 ** 2
    if np.any(outside > tolerance):
        worst = int(np.argmax(outside)) + 1
        raise NonMonotone("curve leaves the sonic disc", float(etas[worst]))

    wedge = etas * math.cos(state2.theta_w) / math.sin(state2.theta_w)
    if np.any(xi >= wedge):
        worst = int(np.argmax(xi - wedge))
        raise NonMonotone("curve crosses the wedge", float(etas[worst]))

    return FreeBoundaryCurve(etas[::-1], xi[::-1], state2.cot_s)


def polar_derivatives(xi, eta, gradient, hessian):
    """``(psi_x, psi_y, psi_xx, psi_xy, psi_yy)`` in the sonic frame from
    cartesian derivatives in the shifted frame

    :raises OriginSingularity: at ``r = 0``
    """
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    r = np.hypot(xi, eta)
    if np.any(r == 0.0):
        raise OriginSingularity((0.0, 0.0))
    p1, p2 = gradient
    h11, h12, h22 = hessian
    radial = xi * p1 + eta * p2
    psi_r = radial / r
    psi_theta = -eta * p1 + xi * p2
    psi_rr = (xi ** 2 * h11 + 2 * xi * eta * h12 + eta ** 2 * h22) / r ** 2
    psi_thth = eta ** 2 * h11 - 2 * xi * eta * h12 + xi ** 2 * h22 - radial
    psi_rth = (-eta * p1 + xi * p2 - xi * eta * h11 + (xi ** 2 - eta ** 2) * h12 + xi * eta * h22) / r
    return -psi_r, psi_theta, psi_rr, -psi_rth, psi_thth


def _subsample(count, cap):
    if count <= cap:
        return np.arange(count)
    return np.unique(np.linspace(0, count - 1, cap).round().astype(int))


def parabolic_norm(samples, alpha=DEFAULT_ALPHA, cap=HOLDER_SAMPLE_CAP):
    """the parabolically scaled C^{2,alpha} norm near the sonic arc

    :param samples: mapping with 1-d arrays ``x``, ``y`` and the sonic
      frame derivatives ``d00, d10, d01, d20, d11, d02`` (``dkl`` is
      ``d^k/dx^k d^l/dy^l``); nodes with ``x <= 0`` are skipped
    """
    x = np.asarray(samples["x"], dtype=float)
    keep = x > 0
    if not np.any(keep):
        return 0.0
    x = x[keep]
    y = np.asarray(samples["y"], dtype=float)[keep]

    total = 0.0
    for k in range(3):
        for l in range(3 - k):
            values = np.asarray(samples["d{0}{1}".format(k, l)], dtype=float)[keep]
            total += float(np.max(x ** (k + 0.5 * l - 2.0) * np.abs(values)))

    chosen = _subsample(len(x), cap)
    xs, ys = x[chosen], y[chosen]
    xa, xb = xs[:, None], xs[None, :]
    smaller = np.minimum(xa, xb)
    distance = ((xa - xb) ** 2 + smaller * (ys[:, None] - ys[None, :]) ** 2) ** (0.5 * alpha)
    distinct = distance > 0
    for k, l in ((2, 0), (1, 1), (0, 2)):
        values = np.asarray(samples["d{0}{1}".format(k, l)], dtype=float)[keep][chosen]
        jump = np.abs(values[:, None] - values[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            quotient = np.where(distinct, smaller ** (alpha - 0.5 * l) * jump / distance, 0.0)
        total += float(np.max(quotient))
    return total


def weighted_norm(samples, alpha=DEFAULT_ALPHA, order=None, cap=HOLDER_SAMPLE_CAP):
    """the C^{2,alpha} norm weighted by the distance to a boundary piece

    :param samples: mapping with 1-d arrays ``xi``, ``eta``, ``distance``
      (to the weighting boundary) and cartesian derivatives
      ``d00, d10, d01, d20, d11, d02``
    :param order: weight exponent, defaults to ``-1 - alpha``
    """
    order = -1.0 - alpha if order is None else order
    delta = np.asarray(samples["distance"], dtype=float)
    total = 0.0
    for k in range(3):
        for l in range(3 - k):
            values = np.asarray(samples["d{0}{1}".format(k, l)], dtype=float)
            total += float(np.max(delta ** max(k + l + order, 0.0) * np.abs(values)))

    chosen = _subsample(len(delta), cap)
    xi = np.asarray(samples["xi"], dtype=float)[chosen]
    eta = np.asarray(samples["eta"], dtype=float)[chosen]
    weight = np.minimum(delta[chosen][:, None], delta[chosen][None, :]) ** max(2.0 + alpha + order, 0.0)
    separation = np.hypot(xi[:, None] - xi[None, :], eta[:, None] - eta[None, :])
    distinct = separation > 0
    for k, l in ((2, 0), (1, 1), (0, 2)):
        values = np.asarray(samples["d{0}{1}".format(k, l)], dtype=float)[chosen]
        jump = np.abs(values[:, None] - values[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            quotient = np.where(distinct, weight * jump / separation ** alpha, 0.0)
        total += float(np.max(quotient))
    return total


def discrete_norms(domain, field, alpha=DEFAULT_ALPHA):
    """``(parabolic norm over the strip x < 2 eps, weighted norm over x > eps)``

    diagnostic estimates of how far ``field`` is from the iteration set
    """
    state2 = domain.state2
    epsilon = domain.epsilon
    gradient = field.gradient()
    hessian = field.hessian()
    inner = (domain.x > FOLD_TOLERANCE * state2.c2) & (domain.x < 2.0 * epsilon)
    outer = domain.x > epsilon

    parabolic = 0.0
    if np.any(inner):
        px, py, pxx, pxy, pyy = polar_derivatives(
            domain.xi[inner], domain.eta[inner],
            (gradient[0][inner], gradient[1][inner]),
            tuple(h[inner] for h in hessian),
        )
        parabolic = parabolic_norm({
            "x": domain.x[inner], "y": domain.y[inner],
            "d00": field.values[inner], "d10": px, "d01": py,
            "d20": pxx, "d11": pxy, "d02": pyy,
        }, alpha)

    weighted = 0.0
    if np.any(outer):
        weighted = weighted_norm({
            "xi": domain.xi[outer], "eta": domain.eta[outer],
            "distance": domain.eta[outer] + state2.v2,
            "d00": field.values[outer], "d10": gradient[0][outer], "d01": gradient[1][outer],
            "d20": hessian[0][outer], "d11": hessian[1][outer], "d02": hessian[2][outer],
        }, alpha)
    return parabolic, weighted
