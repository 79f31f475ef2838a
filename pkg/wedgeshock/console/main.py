#!/usr/bin/env python
# -*- coding: utf-8 -*-
#

"""
wedgeshock.console.main
-----------------------


the ``entrypoint()`` of the ``wedgeshock`` command and its subcommands

exit codes: ``0`` success, ``1`` usage or configuration error, ``2``
the solver did not converge, ``3`` a verification check failed.
"""

import os
import sys
import math
import logging
import argparse

import coloredlogs
import gevent.pool
from gevent import subprocess

from wedgeshock import emit
from wedgeshock.gas import incident_shock
from wedgeshock.logs import LogPublisher
from wedgeshock.util import serialized_exception
from wedgeshock.config import RunConfig
from wedgeshock.errors import SolverError
from wedgeshock.errors import WedgeShockError
from wedgeshock.errors import DegenerateShock
from wedgeshock.errors import ConfigurationError
from wedgeshock.states import state2_solve
from wedgeshock.states import normal_reflection
from wedgeshock.iteration import run_to_fixed_point
from wedgeshock.verification import run_battery
from wedgeshock.verification import convergence_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_VERIFICATION = 3

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("{0}: {1}".format(self.prog, message))


def add_angle_arguments(parser, required=False):
    angle = parser.add_mutually_exclusive_group(required=required)
    angle.add_argument("--sigma", type=float, help="pi/2 minus the wedge angle, radians")
    angle.add_argument("--theta-w", type=float, dest="theta_w", help="the wedge angle, radians")


def build_parser():
    parser = ArgumentParser(
        prog="wedgeshock",
        description="regular shock reflection off a wedge close to normal reflection",
    )
    parser.add_argument("--log-level", default="INFO", help="console log level (default INFO)")
    parser.add_argument(
        "--publish-logs", metavar="ADDRESS", help="also publish log records on a ZMQ PUB socket"
    )
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    commands.required = True

    state2 = commands.add_parser("state2", help="print the uniform state behind the reflected shock")
    state2.add_argument("--gamma", type=float, required=True)
    state2.add_argument("--rho0", type=float, required=True)
    state2.add_argument("--rho1", type=float, required=True)
    add_angle_arguments(state2, required=True)

    solve = commands.add_parser("solve", help="solve the free-boundary problem of one config")
    solve.add_argument("config", help="path to a key = value config file")
    solve.add_argument("--output-dir", dest="output_dir")
    add_angle_arguments(solve)

    sweep = commands.add_parser("sweep", help="convergence study towards normal reflection")
    sweep.add_argument("config", help="path to a key = value config file")
    sweep.add_argument("--sigmas", required=True, help="comma-separated values of sigma")
    sweep.add_argument("--jobs", type=int, default=1, help="concurrent solve processes")
    sweep.add_argument("--output-dir", dest="output_dir")

    verify = commands.add_parser("verify", help="re-run the checks on a solve output directory")
    verify.add_argument("directory")
    return parser


def parse_sigmas(text):
    try:
        sigmas = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError("--sigmas expects comma-separated numbers, got {0!r}".format(text))
    if not sigmas:
        raise UsageError("--sigmas is empty")
    return sigmas


def load_config(args):
    run_config = RunConfig.load(args.config)
    overrides = {}
    if getattr(args, "output_dir", None):
        overrides["output_dir"] = args.output_dir
    if getattr(args, "sigma", None) is not None:
        overrides["sigma"] = args.sigma
    if getattr(args, "theta_w", None) is not None:
        overrides["theta_w"] = args.theta_w
    return run_config.replace(**overrides) if overrides else run_config


def cmd_state2(args):
    """prints the normal reflection and state (2) with 12 significant digits"""
    gas = incident_shock(args.gamma, args.rho0, args.rho1)
    theta_w = args.theta_w if args.theta_w is not None else 0.5 * math.pi - args.sigma
    normal = normal_reflection(gas)
    state2 = state2_solve(gas, theta_w, normal=normal)

    rows = [
        ("rho2bar", normal.rho2bar),
        ("xibar", normal.xibar),
        ("c2bar", normal.c2bar),
        ("rho2", state2.rho2),
        ("theta_s", state2.theta_s),
        ("xitilde", state2.xitilde),
        ("u2", state2.u2),
        ("v2", state2.v2),
        ("c2", state2.c2),
        ("xihat", state2.xihat),
        ("P0", state2.P0),
        ("P1", state2.P1),
    ]
    for name, value in rows:
        if isinstance(value, tuple):
            text = "({0})".format(", ".join("{0:.12g}".format(v) for v in value))
        else:
            text = "{0:.12g}".format(value)
        print("{0:<8} {1}".format(name, text))
    return EXIT_OK


def solve_one(run_config, write=True):
    """runs one config to its fixed point and writes its output directory

    :raises SolverError: after writing a summary of the failed run
    """
    gas = incident_shock(run_config.gamma, run_config.rho0, run_config.rho1)
    normal = normal_reflection(gas)
    config = run_config.iteration_config(normal)
    snapshots = []

    def observer(step, fb, residual):
        if run_config.emit_snapshots:
            snapshots.append((step, fb))

    try:
        solution = run_to_fixed_point(gas, run_config.theta, config, verify=True, observer=observer)
    except SolverError as e:
        if write:
            if not os.path.isdir(run_config.output_dir):
                os.makedirs(run_config.output_dir)
            emit.write_summary(
                run_config.output_dir,
                emit.summary_values(run_config, error=serialized_exception(e)),
            )
        raise

    if write:
        emit.write_solution(run_config.output_dir, run_config, solution, snapshots)
    return solution


def cmd_solve(args):
    run_config = load_config(args)
    solution = solve_one(run_config)
    print("converged={0} iterations={1}".format(
        "true" if solution.converged else "false", solution.iterations
    ))
    for check in solution.verification:
        print("{0:<28} {1}".format(check.name, check.verdict))
    return EXIT_OK if solution.verification.passed else EXIT_VERIFICATION


def launch(command):
    """runs one child process, returns its exit status"""
    logger.info("launching %s", " ".join(command))
    return subprocess.call(command)


def sweep_directories(run_config, sigmas):
    return [
        (sigma, os.path.join(run_config.output_dir, "sigma-{0:.6g}".format(sigma)))
        for sigma in sigmas
    ]


def cmd_sweep(args, launcher=None):
    """one ``solve`` per sigma, concurrently when ``--jobs`` exceeds 1,
    then the convergence table from the written bundles"""
    launcher = launcher or launch
    run_config = load_config(args)
    sigmas = parse_sigmas(args.sigmas)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")

    runs = sweep_directories(run_config, sigmas)
    solutions = []
    if args.jobs == 1:
        for sigma, directory in runs:
            solutions.append(solve_one(run_config.replace(sigma=sigma, output_dir=directory)))
    else:
        commands = []
        for sigma, directory in runs:
            if not os.path.isdir(directory):
                os.makedirs(directory)
            path = os.path.join(directory, "config.txt")
            with open(path, "w") as fd:
                fd.write(run_config.replace(sigma=sigma, output_dir=directory).serialize())
            commands.append([sys.executable, "-m", "wedgeshock.console.main", "solve", path])

        pool = gevent.pool.Pool(args.jobs)
        statuses = pool.map(launcher, commands)
        # any other status means the child left no bundle behind
        failed = [
            (sigma, status) for (sigma, _), status in zip(runs, statuses)
            if status not in (EXIT_OK, EXIT_VERIFICATION)
        ]
        if failed:
            logger.error("solve failed for (sigma, exit status) in %s", failed)
            return EXIT_SOLVER
        for sigma, directory in runs:
            _, solution = emit.read_bundle(os.path.join(directory, "solution.msgpack"))
            solutions.append(solution)

    table = convergence_table(solutions, run_config.global_samples)
    path = os.path.join(run_config.output_dir, "convergence.csv")
    emit.write_convergence(path, table, run_config.hash())
    print(",".join(table.columns))
    for row in table.rows:
        print(",".join("" if row[c] is None else "{0:.12g}".format(row[c]) for c in table.columns))
    print("monotone={0} ratios_ok={1}".format(table.monotone, table.ratios_ok))
    return EXIT_OK if table.passed else EXIT_VERIFICATION


def cmd_verify(args):
    """re-runs the verification battery on ``solution.msgpack``"""
    path = os.path.join(args.directory, "solution.msgpack")
    if not os.path.exists(path):
        raise UsageError("no solution.msgpack in {0}".format(args.directory))
    _, solution = emit.read_bundle(path)
    report = run_battery(solution)
    for check in report:
        print("{0:<28} {1} value={2:.6e} threshold={3:.6e}".format(
            check.name, check.verdict, check.value, check.threshold
        ))
    return EXIT_OK if report.passed else EXIT_VERIFICATION


COMMANDS = {
    "state2": cmd_state2,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def install_logging(args):
    coloredlogs.install(level=args.log_level.upper())
    if not args.publish_logs:
        return None

    publisher = LogPublisher()
    publisher.bind("logs", args.publish_logs)
    logging.getLogger("wedgeshock").addHandler(publisher.get_log_handler())
    return publisher


def main(argv=None):
    """parses ``argv``, runs the subcommand and returns the exit code"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write("{0}\n".format(e))
        return EXIT_USAGE

    publisher = install_logging(args)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, DegenerateShock) as e:
        sys.stderr.write("{0}\n".format(e))
        return EXIT_USAGE
    except (SolverError, WedgeShockError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_SOLVER
    finally:
        if publisher is not None:
            publisher.close()


def entrypoint():
    """runs the ``wedgeshock`` command line

    ::

      $ wedgeshock state2 --gamma 2 --rho0 1 --rho1 2 --sigma 0.01
      $ wedgeshock solve run.cfg --output-dir out/sigma-0.01
      $ wedgeshock sweep run.cfg --sigmas 0.02,0.01,0.005 --jobs 3
      $ wedgeshock verify out/sigma-0.01
    """
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
