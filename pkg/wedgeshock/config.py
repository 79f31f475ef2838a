#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.config
~~~~~~~~~~~~~~~~~

Run configuration: flat ``key = value`` text with ``#`` comments.

::

  # coarse run near normal reflection
  gamma = 1.4
  sigma = 0.02
  n_radial = 32
  n_angular = 32

Entries declared ``auto`` are resolved from the normal reflection when
:py:meth:`RunConfig.iteration_config` is called.
"""
import io
import math
import logging
from collections import OrderedDict

from wedgeshock.util import sha256_hex
from wedgeshock.errors import ConfigurationError
from wedgeshock.serializers import KeyValue

AUTO = "auto"

logger = logging.getLogger(__name__)


class Option(object):
    """one declared configuration key

    :param kind: one of ``float``, ``int``, ``bool``, ``str`` or
      ``auto`` (a float that may be left to the solver)
    """

    def __init__(self, name, kind, default, doc):
        self.name = name
        self.kind = kind
        self.default = default
        self.doc = doc

    def __repr__(self):
        return "Option({0}, {1})".format(self.name, self.kind)

    def coerce(self, raw):
        if not isinstance(raw, str):
            return self.check(raw)

        text = raw.strip()
        try:
            if self.kind == "auto":
                return None if text.lower() in (AUTO, "none", "") else self.check(float(text))
            if self.kind == "float":
                return self.check(float(text))
            if self.kind == "int":
                return self.check(int(text))
        except ValueError:
            raise ConfigurationError(self.name, "{0!r} (expected {1})".format(raw, self.kind))

        if self.kind == "bool":
            lowered = text.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ConfigurationError(self.name, "{0!r} (expected true or false)".format(raw))
        return text

    def check(self, value):
        if self.kind in ("float", "auto") and value is not None:
            value = float(value)
            if not math.isfinite(value):
                raise ConfigurationError(self.name, "{0!r} is not finite".format(value))
        elif self.kind == "int":
            value = int(value)
        elif self.kind == "bool":
            value = bool(value)
        return value

    def format(self, value):
        if value is None:
            return AUTO
        if self.kind == "bool":
            return "true" if value else "false"
        if self.kind in ("float", "auto"):
            return repr(float(value))
        return str(value)


OPTIONS = OrderedDict((option.name, option) for option in (
    Option("gamma", "float", 2.0, "adiabatic exponent"),
    Option("rho0", "float", 1.0, "density of the gas at rest"),
    Option("rho1", "float", 2.0, "density behind the incident shock"),
    Option("sigma", "float", 0.0, "pi/2 minus the wedge angle"),
    Option("theta_w", "auto", None, "wedge angle, instead of sigma"),
    Option("sigma_max", "float", 0.15, "largest sigma the state (2) solver accepts"),
    Option("n_radial", "int", 64, "grid nodes along the free boundary"),
    Option("n_angular", "int", 64, "grid nodes from the shock to the sonic arc"),
    Option("epsilon", "auto", None, "width of the near-sonic strip, auto = 0.1 (c2bar - |xibar|)"),
    Option("delta_max", "float", 0.1, "first elliptic regularization level"),
    Option("delta_levels", "int", 11, "number of regularization levels"),
    Option("delta_final", "float", 0.0, "last regularization level"),
    Option("relaxation", "float", 0.7, "weight of the extracted shock in each outer step"),
    Option("tol_fb", "auto", None, "outer stopping tolerance, auto = 1e-8 c2bar"),
    Option("tol_picard", "float", 1e-9, "inner stopping tolerance"),
    Option("max_picard", "int", 60, "inner iterations per regularization level"),
    Option("picard_relax_after", "int", 20, "inner iterations before under-relaxation"),
    Option("max_outer", "int", 100, "outer iterations"),
    Option("alpha", "float", 0.25, "Holder exponent of the reported norms"),
    Option("obliqueness_fraction", "float", 0.25, "lowest accepted obliqueness, relative"),
    Option("global_samples", "int", 129, "nodes per side of the global field grid"),
    Option("output_dir", "str", "output", "directory receiving the run files"),
    Option("emit_grid", "bool", False, "write grid.csv"),
    Option("emit_coefficients", "bool", False, "write coefficients.csv"),
    Option("emit_snapshots", "bool", False, "write one shock snapshot per outer step"),
))


class RunConfig(object):
    """the validated values of every :py:data:`OPTIONS` key"""

    def __init__(self, values=None):
        values = values or {}
        if values.get("theta_w") is not None and "sigma" in values:
            raise ConfigurationError(None, "sigma and theta_w are mutually exclusive")

        merged = OrderedDict((name, option.default) for name, option in OPTIONS.items())
        for key, value in values.items():
            if key not in OPTIONS:
                raise ConfigurationError(key, "unknown key")
            merged[key] = OPTIONS[key].coerce(value)
        self.values = merged
        self.validate()

    def __repr__(self):
        return "RunConfig(sigma={0!r}, resolution={1!r})".format(self.sigma, self.resolution)

    def __getattr__(self, name):
        values = self.__dict__.get("values")
        if values is not None and name in values:
            return values[name]
        raise AttributeError(name)

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.serialize() == other.serialize()

    def __ne__(self, other):
        return not self == other

    @classmethod
    def parse(cls, text):
        """parses config text; unknown keys and malformed values raise
        :py:class:`~wedgeshock.errors.ConfigurationError`"""
        try:
            raw = KeyValue().unpack(text)
        except ValueError as e:
            raise ConfigurationError(None, str(e))
        return cls(raw)

    @classmethod
    def load(cls, path):
        with io.open(path, "r", encoding="utf-8") as fd:
            return cls.parse(fd.read())

    def validate(self):
        values = self.values
        if values["theta_w"] is not None:
            values["sigma"] = 0.5 * math.pi - values["theta_w"]
            values["theta_w"] = None

        if values["gamma"] <= 1.0:
            raise ConfigurationError("gamma", "{0!r} (must exceed 1)".format(values["gamma"]))
        if not 0.0 < values["rho0"] < values["rho1"]:
            raise ConfigurationError("rho1", "{0!r} (must exceed rho0 > 0)".format(values["rho1"]))
        if not 0.0 <= values["sigma"] <= values["sigma_max"]:
            raise ConfigurationError(
                "sigma", "{0!r} outside [0, {1!r}]".format(values["sigma"], values["sigma_max"])
            )
        if not 0.0 < values["relaxation"] <= 1.0:
            raise ConfigurationError("relaxation", "{0!r} outside (0, 1]".format(values["relaxation"]))
        if not 0.0 < values["alpha"] < 1.0:
            raise ConfigurationError("alpha", "{0!r} outside (0, 1)".format(values["alpha"]))
        if not 0.0 < values["obliqueness_fraction"] < 1.0:
            raise ConfigurationError(
                "obliqueness_fraction", "{0!r} outside (0, 1)".format(values["obliqueness_fraction"])
            )
        for key in ("n_radial", "n_angular"):
            if values[key] < 8:
                raise ConfigurationError(key, "{0!r} (at least 8)".format(values[key]))
        for key in ("delta_levels", "max_picard", "max_outer", "global_samples"):
            if values[key] < 1:
                raise ConfigurationError(key, "{0!r} (at least 1)".format(values[key]))
        if values["delta_final"] < 0 or values["delta_max"] < values["delta_final"]:
            raise ConfigurationError("delta_max", "need delta_max >= delta_final >= 0")
        for key in ("epsilon", "tol_fb"):
            if values[key] is not None and values[key] <= 0:
                raise ConfigurationError(key, "{0!r} (must be positive)".format(values[key]))
        return self

    @property
    def theta(self):
        """the wedge angle"""
        return 0.5 * math.pi - self.sigma

    @property
    def resolution(self):
        return (self.values["n_radial"], self.values["n_angular"])

    def serialize(self):
        """canonical text: every key in declaration order, ``theta_w``
        folded into ``sigma``"""
        lines = []
        for name, option in OPTIONS.items():
            if name == "theta_w":
                continue
            lines.append("{0} = {1}".format(name, option.format(self.values[name])))
        return "\n".join(lines) + "\n"

    def hash(self):
        """sha256 of :py:meth:`serialize`"""
        return sha256_hex(self.serialize())

    def replace(self, **overrides):
        """a copy with some keys changed; ``theta_w`` replaces ``sigma``"""
        values = OrderedDict(self.values)
        del values["theta_w"]
        if overrides.get("theta_w") is not None:
            del values["sigma"]
        values.update(overrides)
        return self.__class__(values)

    def to_dict(self):
        return dict((name, self.values[name]) for name in OPTIONS if name != "theta_w")

    def iteration_config(self, normal):
        """the numerical :py:class:`~wedgeshock.iteration.IterationConfig`;
        ``auto`` entries are filled from ``normal``"""
        from wedgeshock.solver import delta_schedule
        from wedgeshock.iteration import IterationConfig

        return IterationConfig.defaults(
            normal,
            self.sigma,
            epsilon=self.epsilon,
            tol_fb=self.tol_fb,
            resolution=self.resolution,
            schedule=delta_schedule(self.delta_max, self.delta_levels, self.delta_final),
            relaxation=self.relaxation,
            max_outer=self.max_outer,
            tol_picard=self.tol_picard,
            max_picard=self.max_picard,
            relax_after=self.picard_relax_after,
            obliqueness_fraction=self.obliqueness_fraction,
            alpha=self.alpha,
            sigma_max=self.sigma_max,
        )
