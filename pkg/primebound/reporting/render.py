import json
import math
import re
from fractions import Fraction

import numpy as np

from primebound.bounds.logvalue import LogValue
from primebound.constants import JSON_SIGNIFICANT_DIGITS
from primebound.errors import PreconditionError

_NESTED = re.compile(r"^exp\(exp\((?P<outer>[^()]+)\)\)$|^exp\((?P<inner>[^()]+)\)$")


def format_float(value):
    """A float with 17 significant digits; non-finite values become strings."""
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    text = format(value, ".{}g".format(JSON_SIGNIFICANT_DIGITS))
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _plain(value):
    if isinstance(value, LogValue):
        return value.to_dict()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


def _encode(value, indent, level):
    value = _plain(value)
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)

    if indent is None:
        newline, pad, closing, separator = "", "", "", ", "
    else:
        newline = "\n"
        pad = " " * (indent * (level + 1))
        closing = " " * (indent * level)
        separator = ","

    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            "{}{}: {}".format(pad, json.dumps(str(k), ensure_ascii=False), _encode(v, indent, level + 1))
            for k, v in value.items()
        ]
        return "{{{}{}{}{}}}".format(newline, (separator + newline).join(items), newline, closing)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ["{}{}".format(pad, _encode(v, indent, level + 1)) for v in value]
        return "[{}{}{}{}]".format(newline, (separator + newline).join(items), newline, closing)

    raise PreconditionError("cannot render {!r} as JSON".format(value))


def dumps(value, indent=2):
    """JSON text of value with every float at 17 significant digits."""
    return _encode(value, indent, 0)


def dumps_line(value):
    """One compact JSON Lines record."""
    return _encode(value, None, 0)


def render_logvalue(value):
    return dumps_line(value.to_dict())


def parse_nested(text):
    """Inverse of LogValue.nested: 'exp(L)' or 'exp(exp(M))' back to a LogValue."""
    match = _NESTED.match(text.strip())
    if match is None:
        raise PreconditionError("not a nested exponential: {!r}".format(text))
    if match.group("outer") is not None:
        return LogValue(math.exp(float(match.group("outer"))))
    return LogValue(float(match.group("inner")))
