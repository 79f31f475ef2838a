#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
wedgeshock.logs
~~~~~~~~~~~~~~~

Publishing log records over a ZMQ PUB socket, so a long sweep can be
followed from another process with a plain SUB socket.
"""
import logging

import zmq

from wedgeshock.util import cast_bytes
from wedgeshock.serializers import JSON
from wedgeshock.errors import ConfigurationError


class LogPublisher(object):
    """owns PUB sockets keyed by name and publishes serialized payloads

    :param zmq: the zmq module or a stand-in exposing ``Context`` and ``PUB``
    :param context: an existing context, a new one is created otherwise
    :param serialization_backend: a :py:class:`~wedgeshock.serializers.BaseSerializer`
    """

    def __init__(self, zmq=zmq, context=None, serialization_backend=None):
        self.zmq = zmq
        self.context = context or zmq.Context()
        self.serialization_backend = serialization_backend or JSON()
        self.sockets = {}
        self.addresses = {}

    def __repr__(self):
        return "LogPublisher({0})".format(", ".join(sorted(self.addresses)))

    def bind(self, socket_name, address):
        """creates a PUB socket under ``socket_name`` bound to ``address``"""
        if not address:
            raise ConfigurationError("publish_logs", "empty address for socket {0!r}".format(socket_name))

        socket = self.context.socket(self.zmq.PUB)
        socket.bind(address)
        self.sockets[socket_name] = socket
        self.addresses[socket_name] = address
        return socket

    def publish_safe(self, name, topic, data):
        """serializes ``data`` and sends ``[topic, payload]``; silently
        drops the message when ``name`` was never bound"""
        socket = self.sockets.get(name)
        if socket is None:
            return False

        payload = self.serialization_backend.pack(data)
        socket.send_multipart([cast_bytes(topic), cast_bytes(payload)])
        return True

    def get_log_handler(self, socket_name="logs", topic_name="logs"):
        return ZMQPubHandler(self, socket_name, topic_name)

    def close(self):
        for socket in self.sockets.values():
            socket.close()
        self.sockets.clear()
        self.addresses.clear()


class ZMQPubHandler(logging.Handler):
    default_formatter = logging.Formatter(
        "[%(asctime)s] %(levelname)s %(filename)s:%(lineno)d - %(message)s\n",
        datefmt="%Y-%m-%dT%H:%M:%SZ",
    )

    formatters = {
        logging.DEBUG: default_formatter,
        logging.INFO: default_formatter,
        logging.WARN: default_formatter,
        logging.ERROR: logging.Formatter(
            "[%(asctime)s] %(levelname)s %(filename)s:%(lineno)d - %(message)s - %(exc_info)s\n",
            datefmt="%Y-%m-%dT%H:%M:%SZ",
        ),
        logging.CRITICAL: default_formatter,
    }

    def __init__(self, publisher, socket_name="logs", topic_name="logs"):
        super(ZMQPubHandler, self).__init__()

        self.publisher = publisher
        self.socket_name = socket_name
        self.topic_name = cast_bytes(topic_name)

    def format(self, record):
        return self.formatters.get(record.levelno, self.default_formatter).format(record)

    def emit(self, record):
        msg = self.format(record)
        args = [str(a) for a in record.args] if isinstance(record.args, tuple) else record.args
        data = {"msg": msg, "args": args, "level": record.levelno}
        self.publisher.publish_safe(self.socket_name, self.topic_name, data)
