"""Shared witness-report records used by all validators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class Violation:
    """A single failed axiom instance.

    axiom: short identifier of the broken law, e.g. "jacobi".
    witness: the basis tuple (indices) where it fails.
    detail: human-readable residual description.
    """

    axiom: str
    witness: Tuple
    detail: str = ""

    def __str__(self) -> str:
        w = ",".join(str(x) for x in self.witness)
        out = f"{self.axiom} at ({w})"
        if self.detail:
            out += f": {self.detail}"
        return out
