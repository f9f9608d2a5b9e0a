"""Deterministic number formatting for CSV and table output."""

from __future__ import annotations


def format_cell(x) -> str:
    """Integral values print without a decimal point; everything else uses
    repr, which round-trips float64 exactly."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)
