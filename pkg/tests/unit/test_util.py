#!/usr/bin/env python
# -*- coding: utf-8 -*-
from wedgeshock.util import cast_bytes
from wedgeshock.util import sha256_hex
from wedgeshock.util import serialized_exception
from wedgeshock.errors import NewtonDiverged


def test_cast_bytes():
    ("util.cast_bytes() should encode text and keep bytes")

    cast_bytes("sigma").should.equal(b"sigma")
    cast_bytes(b"sigma").should.equal(b"sigma")
    cast_bytes(12).should.equal(b"12")


def test_sha256_hex():
    ("util.sha256_hex() should give the same digest for text and its bytes")

    sha256_hex("gamma = 2.0\n").should.equal(sha256_hex(b"gamma = 2.0\n"))
    len(sha256_hex("")).should.equal(64)


def test_serialized_exception():
    ("util.serialized_exception() should name the module and the class")

    # Given a solver error
    error = NewtonDiverged(0.2, 50, 1e-3)

    # When I serialize it
    data = serialized_exception(error)

    # Then it should be a plain dict
    data.should.have.key("module").being.equal("wedgeshock.errors")
    data.should.have.key("name").being.equal("NewtonDiverged")
    data.should.have.key("message").being.equal(str(error))
