"""Resource caps (storage for length-n blocks is 4**n entries), overridable via env vars."""

from __future__ import annotations

import os

DEFAULT_MATRIX_CAP = 14  # build_channel_matrix and everything needing a dense 2**n x 2**n matrix
DEFAULT_INPUT_CAP = 24   # enumeration input length (worst-case support is 2**n)
DEFAULT_BOUND_CAP = 20   # weight-vector recursions (vector length is 2**n)

MATRIX_CAP_ENV = "TRAPDOOR_MATRIX_CAP"
INPUT_CAP_ENV = "TRAPDOOR_INPUT_CAP"
BOUND_CAP_ENV = "TRAPDOOR_BOUND_CAP"


def _cap(env: str, default: int) -> int:
    raw = os.environ.get(env)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{env} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{env} must be non-negative, got {value}")
    return value


def matrix_cap() -> int:
    return _cap(MATRIX_CAP_ENV, DEFAULT_MATRIX_CAP)


def input_cap() -> int:
    return _cap(INPUT_CAP_ENV, DEFAULT_INPUT_CAP)


def bound_cap() -> int:
    return _cap(BOUND_CAP_ENV, DEFAULT_BOUND_CAP)
