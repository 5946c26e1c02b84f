"""Search limits shared by the synthesis and decomposition routines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SearchConfig:
    """Caps for the integer searches (all doubling searches stop after ``cap_doublings`` steps).

    ``max_minmax_generators`` bounds the generator list handed to the subset-based
    min/max synthesis inside the Lipschitz pipeline; larger lists use the direct
    cell-indexed max-min formula instead.
    """

    cap_doublings: int = 20
    max_minmax_generators: int = 12
    hyperplane_budget: int = 4000
    shortcut: bool = True

    def __post_init__(self):
        if self.cap_doublings < 0:
            raise ValueError("cap_doublings must be non-negative")
        if self.max_minmax_generators < 1:
            raise ValueError("max_minmax_generators must be positive")


DEFAULT = SearchConfig()
