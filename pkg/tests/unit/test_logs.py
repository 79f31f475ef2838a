#!/usr/bin/env python
# -*- coding: utf-8 -*-
import logging

from freezegun import freeze_time
from mock import Mock

from wedgeshock.logs import LogPublisher
from wedgeshock.logs import ZMQPubHandler
from wedgeshock.errors import ConfigurationError


@freeze_time("2016-02-25T19:00:00Z")
def test_emit():
    ("ZMQPubHandler().emit() should publish with the given socket name")

    # Given a mocked publisher
    publisher = Mock(name="LogPublisher")

    # And an instance of ZMQPubHandler
    handler = ZMQPubHandler(publisher, socket_name="foo", topic_name="important")

    # And a logger using it
    logger = logging.getLogger("test-logging-1")
    logger.setLevel(logging.DEBUG)

    logger.handlers = []
    logger.addHandler(handler)

    # When I log a message
    logger.info("sigma=%s converged", 0.01)

    # Then it should have published
    publisher.publish_safe.call_count.should.equal(1)
    name, topic, data = publisher.publish_safe.call_args[0]
    name.should.equal("foo")
    topic.should.equal(b"important")
    data["msg"].should.match(r"^\[2016-02-25T19:00:00Z\] INFO test_logs.py:\d+ - sigma=0.01 converged\n$")
    data["args"].should.equal(["0.01"])
    data["level"].should.equal(logging.INFO)


def test_publisher_bind_and_publish():
    ("LogPublisher.publish_safe() should send the topic and the packed payload")

    # Given a publisher on a mocked zmq
    zmq = Mock(name="zmq")
    socket = zmq.Context.return_value.socket.return_value
    publisher = LogPublisher(zmq=zmq)

    # When I bind and publish
    publisher.bind("logs", "tcp://127.0.0.1:5000")
    sent = publisher.publish_safe("logs", "logs", {"level": 20})

    # Then the socket was bound and written to
    sent.should.be.true
    zmq.Context.return_value.socket.assert_called_once_with(zmq.PUB)
    socket.bind.assert_called_once_with("tcp://127.0.0.1:5000")
    socket.send_multipart.assert_called_once_with([b"logs", b'{"level":20}'])
    repr(publisher).should.equal("LogPublisher(logs)")


def test_publisher_drops_unknown_sockets():
    ("LogPublisher.publish_safe() should return False for a name that was never bound")

    publisher = LogPublisher(zmq=Mock(name="zmq"))

    publisher.publish_safe("logs", "logs", {}).should.be.false


def test_publisher_rejects_empty_address():
    ("LogPublisher.bind() should raise ConfigurationError for an empty address")

    publisher = LogPublisher(zmq=Mock(name="zmq"))

    publisher.bind.when.called_with("logs", "").should.throw(ConfigurationError)


def test_publisher_close():
    ("LogPublisher.close() should close every socket and forget them")

    zmq = Mock(name="zmq")
    socket = zmq.Context.return_value.socket.return_value
    publisher = LogPublisher(zmq=zmq)
    publisher.bind("logs", "ipc:///tmp/wedgeshock-logs")

    publisher.close()

    socket.close.assert_called_once_with()
    publisher.sockets.should.equal({})
    publisher.addresses.should.equal({})
