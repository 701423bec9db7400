"""Parsing and formatting of exact nonnegative rationals.

All probabilities, thresholds and weights in this package are
``fractions.Fraction`` values; this module pins down the one textual
representation (``num/den`` in lowest terms) used across file formats
and CLI output.
"""

from __future__ import annotations

import decimal
from fractions import Fraction

from .errors import FormatError

__all__ = ["parse_ratio", "format_ratio", "decimal_echo"]


def parse_ratio(token: str, line: int | None = None) -> Fraction:
    """Parse ``num/den`` (or a bare integer) into a nonnegative Fraction."""
    parts = token.split("/")
    try:
        if len(parts) == 1:
            value = Fraction(int(parts[0]))
        elif len(parts) == 2:
            value = Fraction(int(parts[0]), int(parts[1]))
        else:
            raise ValueError(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"malformed rational {token!r}", line) from None
    if value < 0:
        raise FormatError(f"negative rational {token!r}", line)
    return value


def format_ratio(value: Fraction) -> str:
    """Canonical ``num/den`` form, always with an explicit denominator."""
    return f"{value.numerator}/{value.denominator}"


def decimal_echo(value: Fraction, digits: int = 20) -> str:
    """Human-readable decimal approximation; never used in comparisons."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return str(d)
