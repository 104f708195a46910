"""Size caps shared by the constructions that can blow up.

The caps can be overridden with environment variables:

    WCOMM_MAX_SIZE   largest universe / coordinate count for powers (default 2**20)
    WCOMM_MAX_FREE   largest number of vectors a closure may produce (default 200000)
    WCOMM_MAX_WORK   table lookups a closure may spend (default 2 * 10**8)
"""

import os
from dataclasses import dataclass


class CapExceeded(RuntimeError):
    """A construction would exceed a configured size cap."""

    def __init__(self, what, required, cap):
        super().__init__(f"{what}: needs {required}, cap is {cap}")
        self.what = what
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class Limits:
    max_size: int = 2**20
    max_free: int = 200_000
    max_work: int = 2 * 10**8


def get_limits() -> Limits:
    return Limits(
        max_size=int(os.environ.get("WCOMM_MAX_SIZE", 2**20)),
        max_free=int(os.environ.get("WCOMM_MAX_FREE", 200_000)),
        max_work=int(os.environ.get("WCOMM_MAX_WORK", 2 * 10**8)),
    )
