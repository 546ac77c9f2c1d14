"""JSON encoding of coefficient values and atomic file output."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .arith import FamilyCoefficient, PadicCapped, format_rational
from .errors import PreconditionError


def ring_of(value) -> str:
    if isinstance(value, PadicCapped):
        return "Zp"
    if isinstance(value, FamilyCoefficient):
        return "family"
    return "QQ"


_RING_ORDER = {"QQ": 0, "Zp": 1, "family": 2}


def ring_of_all(values) -> str:
    """The widest ring among ``values``; rationals embed in either."""
    return max((ring_of(v) for v in values), key=_RING_ORDER.get, default="QQ")


def encode_value(x):
    if isinstance(x, PadicCapped):
        return x.to_json()
    if isinstance(x, FamilyCoefficient):
        return {"k0": x.k0, "coeffs": [encode_value(c) for c in x.coeffs]}
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    raise PreconditionError(f"cannot serialize {type(x).__name__}")


def decode_value(obj):
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict):
        if "k0" in obj:
            return FamilyCoefficient(obj["k0"], [decode_value(c) for c in obj["coeffs"]])
        return PadicCapped.from_json(obj)
    raise PreconditionError(f"cannot decode value {obj!r}")


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
