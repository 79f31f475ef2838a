# -*- coding: utf-8 -*-

from wedgeshock.version import version
from wedgeshock.gas import GasSetup
from wedgeshock.gas import incident_shock
from wedgeshock.states import StateTwo
from wedgeshock.states import state2_solve
from wedgeshock.states import normal_reflection
from wedgeshock.config import RunConfig
from wedgeshock.iteration import IterationConfig
from wedgeshock.iteration import ReflectionSolution
from wedgeshock.iteration import run_to_fixed_point
from wedgeshock.verification import run_battery
from wedgeshock.verification import normal_reflection_limit
from wedgeshock.errors import WedgeShockError
from wedgeshock.errors import SolverError
from wedgeshock.errors import ConfigurationError
from wedgeshock.logs import ZMQPubHandler
from wedgeshock import serializers

__all__ = [
    "version",
    "GasSetup",
    "incident_shock",
    "StateTwo",
    "state2_solve",
    "normal_reflection",
    "RunConfig",
    "IterationConfig",
    "ReflectionSolution",
    "run_to_fixed_point",
    "run_battery",
    "normal_reflection_limit",
    "WedgeShockError",
    "SolverError",
    "ConfigurationError",
    "ZMQPubHandler",
    "serializers",
]
