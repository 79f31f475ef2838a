#!/usr/bin/env python
# -*- coding: utf-8 -*-
import msgpack
import numpy as np
from zmq.utils import jsonapi as json


def plain(item):
    """fallback for values the codecs do not know: numpy scalars and
    arrays become python numbers and lists, anything else its text"""
    if isinstance(item, np.ndarray):
        return item.tolist()
    if isinstance(item, np.generic):
        return item.item()
    return str(item)


class BaseSerializer(object):  # pragma: no cover
    """base class for all serializers

    all base classes must implement the methods ``pack`` and ``unpack``
    """

    def __init__(self, *args, **kw):
        self.initialize(*args, **kw)

    def initialize(self, *args, **kw):
        """optional method that subclasses can override. It takes any
        args and kwargs that were passed to the constructor.
        """

    def pack(self, item):
        """Must receive a python object and return a safe primitive (dict,
        list, int, string, etc).
        """
        raise NotImplementedError

    def unpack(self, item):
        """must receive a *string* and return a python object"""
        raise NotImplementedError


class JSON(BaseSerializer):
    """Serializes to and from :py:mod:`json`"""

    def initialize(self, indent=None):
        self.indent = indent

    def pack(self, item):
        return json.dumps(item, default=plain, indent=self.indent, sort_keys=True).decode("utf-8")

    def unpack(self, item):
        if isinstance(item, str):
            item = item.encode("utf-8")

        return json.loads(item)


class MSGPACK(BaseSerializer):
    """Serializes to and from :py:mod:`msgpack`"""

    def pack(self, item):
        return msgpack.packb(item, default=plain, use_bin_type=True)

    def unpack(self, item):
        return msgpack.unpackb(item, raw=False)


class KeyValue(BaseSerializer):
    """flat ``key=value`` lines; ``#`` starts a comment

    booleans are written as ``true``/``false``, lists comma-separated.
    Unpacking returns every value as a stripped string.
    """

    def pack(self, item):
        lines = []
        for key in sorted(item):
            lines.append("{0}={1}".format(key, self.format_value(item[key])))
        return "\n".join(lines) + "\n"

    def format_value(self, value):
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (list, tuple, np.ndarray)):
            return ",".join(self.format_value(v) for v in value)
        if isinstance(value, (float, np.floating)):
            return repr(float(value))
        if value is None:
            return "none"
        return str(value)

    def unpack(self, item):
        if isinstance(item, bytes):
            item = item.decode("utf-8")

        result = {}
        for line in item.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("expected key=value, got {0!r}".format(line))
            key, value = line.split("=", 1)
            result[key.strip()] = value.strip()
        return result
