#!/usr/bin/env python
# -*- coding: utf-8 -*-
import hashlib


__all__ = [
    "cast_bytes",
    "serialized_exception",
    "sha256_hex",
]


def cast_bytes(s):
    if isinstance(s, bytes):
        return s
    return str(s).encode("utf-8")


def sha256_hex(text):
    return hashlib.sha256(cast_bytes(text)).hexdigest()


def serialized_exception(e):
    exc_type = type(e)
    return {
        "module": str(exc_type.__module__),
        "name": str(exc_type.__name__),
        "message": str(e),
    }
