"""Set-membership machinery: output-magnitude bound checks, the
parameter-dependent time-varying bound recursion, and update-rate accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BoundState:
    """Data-selectivity bound delta with its recursion parameters and counters.

    The bound evolves as
        delta <- beta * delta + (1 - beta) * sqrt(alpha * ||w_eff||^2 * noise_power)
    after each snapshot (post-update weights), a convex combination that keeps
    delta nonnegative. ``fixed=True`` freezes delta (degenerate configuration
    used for fixed-bound comparisons; beta is then ignored).
    """

    delta: float
    alpha: float
    beta: float
    noise_power: float
    fixed: bool = False
    updates_performed: int = 0
    snapshots_seen: int = 0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if not self.fixed:
            if self.alpha <= 1:
                raise ValueError("alpha must exceed 1")
            if not 0 < self.beta < 1:
                raise ValueError("beta must lie in (0, 1)")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")

    @classmethod
    def steady_state(cls, alpha: float, beta: float, noise_power: float,
                     weights_sq_norm: float) -> "BoundState":
        """Start delta at its fixed point under constant weights."""
        delta0 = float(np.sqrt(alpha * weights_sq_norm * noise_power))
        return cls(delta=delta0, alpha=alpha, beta=beta, noise_power=noise_power)

    @classmethod
    def fixed_bound(cls, delta: float, noise_power: float) -> "BoundState":
        """Constant-delta configuration (no recursion)."""
        return cls(delta=delta, alpha=2.0, beta=0.5, noise_power=noise_power, fixed=True)

    def violates(self, y: complex) -> bool:
        """True iff |y|^2 > delta^2; counts the snapshot either way.

        Equality sits inside the constraint set, so the boundary does not
        trigger an update.
        """
        self.snapshots_seen += 1
        return bool(abs(y) ** 2 > self.delta ** 2)

    def record_update(self) -> None:
        self.updates_performed += 1

    def advance(self, weights_sq_norm: float) -> float:
        """Apply the bound recursion with the post-update squared weight norm."""
        if not self.fixed:
            target = np.sqrt(self.alpha * weights_sq_norm * self.noise_power)
            self.delta = float(self.beta * self.delta + (1.0 - self.beta) * target)
        return self.delta

    def update_rate(self) -> float:
        """Fraction of snapshots on which a parameter update occurred."""
        if self.snapshots_seen == 0:
            raise ZeroDivisionError("update rate is undefined before any snapshot")
        return self.updates_performed / self.snapshots_seen
