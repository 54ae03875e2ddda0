"""Canonical JSON reports with pass/fail assertions."""

from __future__ import annotations

import json
from fractions import Fraction

from ..exterior.forms import _Graded
from ..exterior.coeffn import CoefFn
from ..exterior.scalar import Scalar

SCHEMA_VERSION = "1.0"


def _plain(obj):
    """Recursively turn library values into JSON-native ones."""
    if isinstance(obj, (Scalar, CoefFn, _Graded)):
        return obj.render()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return repr(obj)
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class Report:
    """Accumulates results and named assertions for one command or scenario."""

    def __init__(self, kind: str, name: str, **header):
        self.kind = kind
        self.name = name
        self.header = header
        self.results: dict = {}
        self.assertions: list = []
        self.timing: dict | None = None

    def add(self, key: str, value) -> None:
        self.results[key] = value

    def check(self, name: str, ok: bool, detail=None) -> bool:
        self.assertions.append({"name": name, "pass": bool(ok), "detail": detail})
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.assertions)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def as_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "name": self.name,
            "header": self.header,
            "results": self.results,
            "assertions": self.assertions,
            "all_pass": self.passed,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out


def emit_report(results) -> bytes:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    if isinstance(results, Report):
        results = results.as_dict()
    elif results is None or results == {}:
        results = Report("empty", "").as_dict()
    text = json.dumps(_plain(results), sort_keys=True, indent=2, ensure_ascii=True)
    return (text + "\n").encode("utf-8")
