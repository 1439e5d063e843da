from __future__ import annotations

import os

DEFAULT_ORACLE_BOUND = 8
DEFAULT_DIM_BOUND = 10
DIM_BOUND_ENV = "TSLAB_DIM_BOUND"


def dim_bound() -> int:
    """Polyhedral dimension bound, overridable through ``TSLAB_DIM_BOUND``."""
    raw = os.environ.get(DIM_BOUND_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DIM_BOUND
    value = int(raw)
    if value < 1:
        raise ValueError(f"{DIM_BOUND_ENV} must be a positive integer, got {raw!r}")
    return value
