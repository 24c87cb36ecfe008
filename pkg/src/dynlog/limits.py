"""Soft size caps for the exhaustive computations.

Every check in dynlog is a brute-force scan, so inputs are capped at desk
scale.  Set ``DYNLOG_CAP_OVERRIDE=1`` (or pass ``override=True``) to lift.
"""
import os

from .errors import SizeCapExceeded

MAX_STATES = 12
MAX_ALGEBRA = 4096
# the down-set space is exponential in |B|
MAX_DOWNSET_BASE = 16
MAX_CANONICAL_STATES = 4096


def overridden(override: bool = False) -> bool:
    return override or os.environ.get("DYNLOG_CAP_OVERRIDE", "") not in ("", "0")


def enforce(what: str, value: int, cap: int, override: bool = False) -> None:
    if value > cap and not overridden(override):
        raise SizeCapExceeded(
            f"{what} is {value}, above the cap of {cap}; "
            "raise the cap or set DYNLOG_CAP_OVERRIDE=1"
        )
