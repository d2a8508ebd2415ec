"""Runtime configuration: enumeration caps and kernel backend selection.

Caps are read from the environment on every call so tests and CLI users can
adjust them without re-importing.
"""

import os

DEFAULT_ORDER_CAP = 2000
DEFAULT_LATTICE_CAP = 200


def order_cap() -> int:
    return int(os.environ.get("EQUIFUSE_CAP_ORDER", DEFAULT_ORDER_CAP))


def lattice_cap() -> int:
    return int(os.environ.get("EQUIFUSE_CAP_LATTICE", DEFAULT_LATTICE_CAP))


def numba_disabled() -> bool:
    """True when EQUIFUSE_NO_NUMBA requests the pure-numpy kernel path."""
    return os.environ.get("EQUIFUSE_NO_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )
