"""Coupling data for the delta shell on the unit circle."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PotentialSpec:
    """Boundary coupling V0 * frequency**alpha.

    V0 is the coupling amplitude, alpha in [0, 1] the frequency exponent.
    alpha = 0 is a frequency-independent shell, alpha = 1 the strongly
    frequency-dependent (quantum point interaction) scaling.
    """

    V0: float
    alpha: float

    def __post_init__(self) -> None:
        if not self.V0 > 0:
            raise ValueError(f"V0 must be positive, got {self.V0}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    def v_eff(self, frequency: float) -> float:
        """Effective coupling at a given (positive) frequency."""
        return self.V0 * frequency**self.alpha
