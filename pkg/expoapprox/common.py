import cmath
import math

from .exceptions import InvalidArgumentsError


def _ensure_complex(value, name="lambda"):
    """Coerce ``value`` to a finite complex number or raise."""
    try:
        z = complex(value)
    except (TypeError, ValueError) as e:
        msg = "'{}' is not a complex number: {!r}"
        raise InvalidArgumentsError(msg.format(name, value)) from e
    if not cmath.isfinite(z):
        msg = "'{}' must be finite, got {!r}"
        raise InvalidArgumentsError(msg.format(name, z))
    return z


def _ensure_degree(value, cap):
    """Validate a polynomial degree against the implementation cap."""
    try:
        integral = not isinstance(value, bool) and int(value) == value
    except (TypeError, ValueError, OverflowError):
        integral = False
    if not integral:
        msg = "Degree must be an integer, got {!r}"
        raise InvalidArgumentsError(msg.format(value))
    value = int(value)
    if value < 0:
        msg = "Degree must be non-negative, got {}"
        raise InvalidArgumentsError(msg.format(value))
    if value > cap:
        msg = "Degree {} exceeds the supported maximum of {}"
        raise InvalidArgumentsError(msg.format(value, cap))
    return value


def _format_float(value):
    """Locale-independent, round-trippable text for a float (17 significant
    digits, always with a decimal point or exponent)."""
    text = "{:.17g}".format(float(value))
    if math.isfinite(value) and not any(c in text for c in ".en"):
        text += ".0"
    return text


def _parse_range(text):
    """Parse ``MIN:MAX:STEPS`` into ``(min, max, steps)``.

    A single step means the lone point ``MIN``.

    """
    parts = text.split(":")
    if len(parts) != 3:
        msg = "Expected MIN:MAX:STEPS, got '{}'"
        raise InvalidArgumentsError(msg.format(text))
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        msg = "Expected MIN:MAX:STEPS, got '{}'"
        raise InvalidArgumentsError(msg.format(text)) from e
    if steps <= 0:
        msg = "Step count must be positive, got {}"
        raise InvalidArgumentsError(msg.format(steps))
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        msg = "Range bounds must be finite and ordered, got '{}'"
        raise InvalidArgumentsError(msg.format(text))
    return lo, hi, steps
