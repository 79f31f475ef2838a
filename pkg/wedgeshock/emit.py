#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.emit
~~~~~~~~~~~~~~~

Writers for everything a run leaves on disk. Tables are CSV written by
:py:func:`numpy.savetxt` with 17 significant digits; the first line
names the package version and the config hash, the second the columns.
Nothing time-dependent is written, so reruns are byte-identical.
"""
import io
import os
import logging

import numpy as np

from wedgeshock.version import version
from wedgeshock.serializers import JSON
from wedgeshock.serializers import MSGPACK
from wedgeshock.serializers import KeyValue
from wedgeshock.iteration import assemble_global
from wedgeshock.iteration import ReflectionSolution
from wedgeshock.assembly import assemble_coefficients

PSI_COLUMNS = ("i", "j", "xi", "eta", "x", "y", "psi", "phi")
GLOBAL_COLUMNS = ("xi", "eta", "phi", "label")
POLYLINE_COLUMNS = ("eta", "xi")
GRID_COLUMNS = ("i", "j", "xi", "eta", "x", "y", "region", "boundary")
COEFFICIENT_COLUMNS = ("i", "j", "A11", "A12", "A22", "cutoff_active")
STATE2_COLUMNS = (
    "sigma", "rho2bar", "xibar", "c2bar", "rho2", "theta_s", "xitilde",
    "u2", "v2", "c2", "xihat", "xi1", "eta1",
)

logger = logging.getLogger(__name__)


def header(config_hash, columns):
    return "wedgeshock {0} config_hash={1}\n{2}".format(version, config_hash, ",".join(columns))


def write_table(path, columns, rows, config_hash, integer_columns=0):
    """writes ``rows`` under the two-line header

    :param integer_columns: how many leading columns are node indices
    """
    rows = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    fmt = ["%d"] * integer_columns + ["%.17g"] * (len(columns) - integer_columns)
    np.savetxt(
        path, rows, fmt=fmt, delimiter=",", header=header(config_hash, columns), comments="# ",
    )
    logger.debug("wrote %s (%d rows)", path, len(rows))
    return path


def read_table(path):
    """the rows of a table written by :py:func:`write_table`"""
    return np.loadtxt(path, delimiter=",", comments="#", ndmin=2)


def psi_rows(solution):
    domain = solution.domain
    i, j = np.meshgrid(np.arange(domain.shape[0]), np.arange(domain.shape[1]), indexing="ij")
    return np.column_stack([
        i.ravel(), j.ravel(), domain.xi.ravel(), domain.eta.ravel(),
        domain.x.ravel(), domain.y.ravel(), solution.psi.values.ravel(),
        solution.phi().values.ravel(),
    ])


def state2_row(state2):
    normal = state2.normal
    return [
        state2.sigma, normal.rho2bar, normal.xibar, normal.c2bar, state2.rho2,
        state2.theta_s, state2.xitilde, state2.u2, state2.v2, state2.c2,
        state2.xihat, state2.xi1, state2.eta1,
    ]


def summary_values(run_config, solution=None, error=None):
    """flat mapping written to ``summary.txt`` and ``summary.json``"""
    values = {
        "version": version,
        "config_hash": run_config.hash(),
        "sigma": run_config.sigma,
        "converged": bool(solution is not None and solution.converged),
    }
    if solution is not None:
        values["iterations"] = solution.iterations
        values["outer_residual"] = solution.residual
        for key, value in sorted(solution.diagnostics.items()):
            values["diagnostic.{0}".format(key)] = value
        if solution.verification is not None:
            values["verified"] = solution.verification.passed
            for check in solution.verification:
                values["check.{0}".format(check.name)] = check.verdict
                values["check.{0}.value".format(check.name)] = check.value
    if error is not None:
        values["error.name"] = error["name"]
        values["error.module"] = error["module"]
        values["error.message"] = error["message"]
    return values


def write_summary(directory, values):
    text_path = os.path.join(directory, "summary.txt")
    json_path = os.path.join(directory, "summary.json")
    with io.open(text_path, "w", encoding="utf-8") as fd:
        fd.write(KeyValue().pack(values))
    with io.open(json_path, "w", encoding="utf-8") as fd:
        fd.write(JSON(indent=2).pack(values))
        fd.write("\n")
    return text_path, json_path


def write_bundle(path, run_config, solution):
    """``solution.msgpack``: the config text and everything
    :py:meth:`~wedgeshock.iteration.ReflectionSolution.from_dict` needs"""
    data = solution.to_dict()
    data["config_text"] = run_config.serialize()
    with io.open(path, "wb") as fd:
        fd.write(MSGPACK().pack(data))
    return path


def read_bundle(path):
    """returns ``(config text, solution)``"""
    with io.open(path, "rb") as fd:
        data = MSGPACK().unpack(fd.read())
    return data.get("config_text", ""), ReflectionSolution.from_dict(data)


def write_solution(directory, run_config, solution, snapshots=None):
    """every file of a ``solve`` run; returns the written paths"""
    if not os.path.isdir(directory):
        os.makedirs(directory)
    config_hash = run_config.hash()
    written = []

    def path(name):
        written.append(os.path.join(directory, name))
        return written[-1]

    write_table(path("psi.csv"), PSI_COLUMNS, psi_rows(solution), config_hash, 2)
    field = assemble_global(solution, run_config.global_samples)
    write_table(path("global.csv"), GLOBAL_COLUMNS, field.table(), config_hash)
    write_table(path("shock.csv"), POLYLINE_COLUMNS, field.polyline, config_hash)
    write_table(path("state2.csv"), STATE2_COLUMNS, [state2_row(solution.state2)], config_hash)

    if run_config.emit_grid:
        write_table(path("grid.csv"), GRID_COLUMNS, solution.domain.grid_table(), config_hash, 2)
    if run_config.emit_coefficients:
        coeffs = assemble_coefficients(
            solution.domain, solution.state2, solution.psi, solution.psi, solution.config.epsilon, 0.0,
        )
        write_table(path("coefficients.csv"), COEFFICIENT_COLUMNS, coeffs.table(), config_hash, 2)
    for step, fb in snapshots or ():
        name = "shock-step-{0:03d}.csv".format(step)
        write_table(path(name), POLYLINE_COLUMNS, np.column_stack([fb.eta, fb.xi]), config_hash)

    write_bundle(path("solution.msgpack"), run_config, solution)
    values = summary_values(run_config, solution)
    values["global.incident_jump"] = field.incident_jump
    values["global.corner_slope_jump"] = field.corner_slope_jump
    written.extend(write_summary(directory, values))
    return written


def write_convergence(path, table, config_hash):
    return write_table(path, table.columns, table.array(), config_hash)
