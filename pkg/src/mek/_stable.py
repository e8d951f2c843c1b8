"""Log-domain scalar helpers that stay finite for extreme parameter values."""

import math


def log_cosh(x: float) -> float:
    """ln(cosh x), safe against overflow for large |x|."""
    x = abs(x)
    if x < 1.0:
        return math.log(math.cosh(x))
    # cosh x = e^x (1 + e^{-2x}) / 2
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def log_sinh(x: float) -> float:
    """ln(sinh x) for x > 0."""
    if x <= 0.0:
        raise ValueError("log_sinh requires x > 0")
    if x < 1.0:
        return math.log(math.sinh(x))
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


def log_tanh(x: float) -> float:
    """ln(tanh x) for x > 0; accurate to the last bit even when tanh x rounds to 1."""
    if x <= 0.0:
        raise ValueError("log_tanh requires x > 0")
    t = math.exp(-2.0 * x)
    return math.log1p(-2.0 * t / (1.0 + t))


def log1mexp(x: float) -> float:
    """ln(1 - e^x) for x < 0, stable near both ends."""
    if x >= 0.0:
        raise ValueError("log1mexp requires x < 0")
    if x > -math.log(2.0):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


def xlnx(x: float) -> float:
    """x ln x extended continuously by 0 at x = 0."""
    if x < 0.0:
        raise ValueError("xlnx requires x >= 0")
    return x * math.log(x) if x > 0.0 else 0.0
