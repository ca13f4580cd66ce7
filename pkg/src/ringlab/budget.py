"""Resource guards for explicit enumeration.

Two budgets protect against accidentally huge computations: an order guard on
ring construction and a work guard on exhaustive sweeps (difference spaces,
root counting, subgroup duals). Both can be overridden per call or through
the environment variables RINGLAB_ORDER_GUARD and RINGLAB_WORK_GUARD.
"""

from __future__ import annotations

import os

DEFAULT_ORDER_GUARD = 1 << 20
DEFAULT_WORK_GUARD = 1 << 24


def _from_env(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        return fallback
    return value if value > 0 else fallback


def order_guard(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    return _from_env("RINGLAB_ORDER_GUARD", DEFAULT_ORDER_GUARD)


def work_guard(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    return _from_env("RINGLAB_WORK_GUARD", DEFAULT_WORK_GUARD)
