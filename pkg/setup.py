#!/usr/bin/env python
# -*- coding: utf-8 -*-
import ast
import os
from setuptools import setup, find_packages


def local_file(*f):
    with open(os.path.join(os.path.dirname(__file__), *f), "r") as fd:
        return fd.read()


class VersionFinder(ast.NodeVisitor):
    VARIABLE_NAME = "version"

    def __init__(self):
        self.version = None

    def visit_Assign(self, node):
        try:
            if node.targets[0].id == self.VARIABLE_NAME:
                self.version = node.value.value
        except Exception:
            self.version = None


def read_version():
    finder = VersionFinder()
    finder.visit(ast.parse(local_file("wedgeshock", "version.py")))
    return finder.version


README = local_file("README.rst")

setup(
    name="wedgeshock",
    version=read_version(),
    description="\n".join(
        [
            "Numerical solver and verification harness for regular shock reflection off a wedge in potential flow.",
            "Solves the free-boundary problem behind the reflected shock and checks the result against the structure known near normal reflection.",
        ]
    ),
    long_description=README,
    long_description_content_type='text/x-rst',
    entry_points={
        "console_scripts": ["wedgeshock = wedgeshock.console.main:entrypoint"]
    },
    packages=find_packages(exclude=["*tests*"]),
    install_requires=local_file("requirements.txt").splitlines(),
    python_requires=">=3.9",
    include_package_data=True,
    package_data={
        "wedgeshock": "*.rst *.md".split()
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: MacOS :: MacOS X",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    zip_safe=False,
)
