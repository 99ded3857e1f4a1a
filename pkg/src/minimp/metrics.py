"""Shared size report for proofs and deductions."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MetricsReport:
    """Size measures of a proof object.

    height: longest thread, counted in sequents for sequent proofs and in
        edges (root at 0) for deduction trees and dags.
    foundation: number of distinct formulas occurring anywhere.
    max_arrows: largest arrow count among those formulas.
    size: number of nodes.
    weight: total character count of all formula labels.
    """

    height: int
    foundation: int
    max_arrows: int
    size: int
    weight: int

    def as_dict(self) -> dict:
        return {
            "height": self.height,
            "foundation": self.foundation,
            "max_arrows": self.max_arrows,
            "size": self.size,
            "weight": self.weight,
        }
