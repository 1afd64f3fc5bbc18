"""Frozen bound constants and the constants-file loader.

The four constants calibrate the desk-scale bound checks:

  c1  packing: a greedy separated net has at most c1*(W/delta)^d vertices
  c2  partition scale: the matcher partitions at delta0 = c2*W / n^(1/(2d))
  c3  matching bounds: pairwise stabs <= c3*W / n^(1/(2d)) and
      per-member stabbed pairs <= c3*n^(1-1/d)
  c4  selection bound: the chosen edge crosses <= c4*n^(7/4) others

c2 is a free parameter (>= 1). c1, c3, c4 were measured once by the
pre-registered harness (``python -m shortedge.fit``) over the frozen
instance grid and rounded up; the acceptance suite asserts them with
zero tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

__all__ = ["Constants", "DEFAULT_CONSTANTS", "load_constants"]


@dataclass(frozen=True)
class Constants:
    c1: float
    c2: float
    c3: float
    c4: float
    min_n: int = 32

    def __post_init__(self):
        if self.c2 < 1:
            raise ValueError("c2 must be >= 1")
        if self.c3 < 2 * self.c2:
            raise ValueError("c3 must be >= 2*c2")
        if self.c1 <= 0 or self.c4 <= 0:
            raise ValueError("constants must be positive")
        if self.min_n < 4:
            raise ValueError("min_n must be at least 4")


# Frozen from the fit harness run recorded in the repository (see README).
DEFAULT_CONSTANTS = Constants(c1=1.0, c2=1.0, c3=2.0, c4=1.0, min_n=32)

_FIELDS = ("c1", "c2", "c3", "c4", "min_n")


def load_constants(path) -> Constants:
    """Read a constants override file: JSON with any subset of
    {"c1", "c2", "c3", "c4", "min_n"}; unknown keys are rejected."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("constants file must hold a JSON object")
    unknown = set(obj) - set(_FIELDS)
    if unknown:
        raise ValueError(f"unknown constants keys: {sorted(unknown)}")
    kwargs = {}
    for k in _FIELDS:
        if k in obj:
            kwargs[k] = int(obj[k]) if k == "min_n" else float(obj[k])
    return replace(DEFAULT_CONSTANTS, **kwargs)
