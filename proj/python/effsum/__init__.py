"""Efficient points of Minkowski sums over groups.

Instances are JSON objects (or paths to JSON files) in the same format the
``effsum`` command line tool reads.
"""

import json
import os

from . import _core
from ._core import EffsumError, MalformedSystem, NotApplicable, ParseError, ValidationError

__all__ = [
    "EffsumError",
    "MalformedSystem",
    "NotApplicable",
    "ParseError",
    "ValidationError",
    "audit",
    "efficient",
    "find_index_cycle",
    "generate",
    "load",
    "minkowski_sum",
    "trace",
    "verdict",
]


def _text(instance):
    if isinstance(instance, dict):
        return json.dumps(instance)
    if isinstance(instance, (str, os.PathLike)) and os.path.exists(instance):
        with open(instance, encoding="utf-8") as f:
            data = json.load(f)
        data.setdefault("name", os.path.basename(os.path.dirname(os.path.abspath(instance))))
        return json.dumps(data)
    if isinstance(instance, str):
        return instance
    raise TypeError("instance must be a dict, a JSON string or a path")


def load(path):
    """Read an instance file into a dict."""
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def verdict(instance):
    """Theorem verdict, brute-force oracle and property audits as a dict."""
    return json.loads(_core.verdict_json(_text(instance)))


def efficient(instance, which="A"):
    """Efficient and dominated points of A, B or their sum ("sum")."""
    return json.loads(_core.efficient_json(_text(instance), which))


def audit(instance):
    return json.loads(_core.audit_json(_text(instance)))


def trace(instance):
    """Returns (trace text, replayed) for a stored system or a T7-T10 instance."""
    return _core.trace_text(_text(instance))


def minkowski_sum(group, a, b):
    return json.loads(_core.minkowski_json(json.dumps(group), json.dumps(a), json.dumps(b)))


def generate(seed, family="random", a_size=5, b_size=3, dimension=2, radius=5):
    return json.loads(_core.generate_json(seed, family, a_size, b_size, dimension, radius))


def find_index_cycle(images, start=1):
    return _core.find_index_cycle(list(images), start)
