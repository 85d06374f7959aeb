"""Stochastic-gradient beamformers with constraint-preserving projected updates.

The update directions are projected orthogonal to the constraint steering
vector, so the distortionless-response constraint is preserved exactly by
every step. The data-selective variants derive the step size from the output
bound: a gated update drives the recomputed output magnitude onto delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds import BoundState
from .lcmv import GainConstraint, NumericsError, ReducedRankState, initial_reduced_state

# gate is treated as closed below this output magnitude (avoids delta/|y| overflow)
MIN_GATED_OUTPUT = 1e-12
# relative floor under which the projected-input power counts as zero
_DEGENERATE_REL = 1e-24


class StepResult(NamedTuple):
    updated: bool
    output: complex


@dataclass(frozen=True)
class SgConfig:
    """Step-size settings for the gradient family.

    ``fixed_step_transform`` / ``fixed_step_weights`` are the relative step
    sizes of the always-updating variants. ``initial_step`` is the nominal
    pre-first-update step of the data-selective variants (kept for config
    fidelity; gated steps are fully determined by the bound).
    ``projector_normalized=False`` reproduces the unnormalized projector
    denominator in the transform step size for comparison studies; the
    normalized form is the one under which the a-posteriori bound property
    holds exactly.
    """

    fixed_step_transform: float = 0.05
    fixed_step_weights: float = 0.05
    initial_step: float = 0.05
    projector_normalized: bool = True

    def __post_init__(self):
        if min(self.fixed_step_transform, self.fixed_step_weights, self.initial_step) <= 0:
            raise ValueError("step sizes must be positive")


def orthogonal_projector(a: np.ndarray) -> np.ndarray:
    """Hermitian idempotent matrix I - a a^H / (a^H a); annihilates ``a``."""
    a = np.asarray(a, dtype=complex)
    sq = np.real(a.conj() @ a)
    if sq == 0.0:
        raise ValueError("cannot project out the zero vector")
    return np.eye(a.size) - np.outer(a, a.conj()) / sq


def project_out(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Component of ``x`` orthogonal to ``a`` (O(m), no matrix formed)."""
    return x - a * ((a.conj() @ x) / np.real(a.conj() @ a))


def transform_step_size(y: complex, delta: float, x: np.ndarray, w_bar: np.ndarray,
                        a: np.ndarray, normalized: bool = True) -> float:
    """Bound-derived step for the transform update; 0 when the gate is closed.

    With the normalized projector the returned step makes the post-update
    output magnitude equal delta exactly (for this snapshot, weights fixed).
    """
    mag = abs(y)
    if mag ** 2 <= delta ** 2 or mag < MIN_GATED_OUTPUT:
        return 0.0
    xsq = np.real(x.conj() @ x)
    if normalized:
        proj_power = float(np.real(x.conj() @ project_out(a, x)))
    else:
        proj_power = float(xsq - abs(a.conj() @ x) ** 2)
    denom = float(np.real(w_bar.conj() @ w_bar)) * proj_power
    if abs(denom) <= _DEGENERATE_REL * xsq:
        raise NumericsError("bound unreachable: received vector lies in the constraint direction")
    return (1.0 - delta / mag) / denom


def weight_step_size(y: complex, delta: float, x_bar: np.ndarray,
                     a_bar: np.ndarray) -> float:
    """Bound-derived step for the reduced weight update; 0 when gate closed."""
    mag = abs(y)
    if mag ** 2 <= delta ** 2 or mag < MIN_GATED_OUTPUT:
        return 0.0
    denom = float(np.real(x_bar.conj() @ project_out(a_bar, x_bar)))
    if abs(denom) <= _DEGENERATE_REL * np.real(x_bar.conj() @ x_bar):
        raise NumericsError("bound unreachable: reduced vector lies in the constraint direction")
    return (1.0 - delta / mag) / denom


def transform_update(transform: np.ndarray, w_bar: np.ndarray, x: np.ndarray,
                     y: complex, mu_t: float, a: np.ndarray) -> np.ndarray:
    """Projected-gradient transform update; leaves T^H a unchanged."""
    if mu_t == 0.0:
        return transform
    return transform - (mu_t * np.conj(y)) * np.outer(project_out(a, x), w_bar.conj())


def weight_update(w_bar: np.ndarray, x_bar: np.ndarray, y: complex, mu_w: float,
                  a_bar: np.ndarray) -> np.ndarray:
    """Projected-gradient weight update; leaves w^H a_bar unchanged."""
    if not np.any(a_bar):
        raise NumericsError("reduced steering vector is zero (degenerate transform)")
    if mu_w == 0.0:
        return w_bar
    return w_bar - (mu_w * np.conj(y)) * project_out(a_bar, x_bar)


class JioSmSg:
    """Jointly adapted transform/weights with data-selective bound-gated steps.

    A gated snapshot updates the transform with its bound-derived step, then
    recomputes the reduced quantities and output and applies the weight update
    under a re-checked gate. Because the transform step lands the output
    magnitude on the bound, the weight stage only acts on residual excess;
    the alternating order keeps the pair inside the constraint set after
    every snapshot. The bound advances on the post-update effective weights.
    """

    def __init__(self, state: ReducedRankState, bound: BoundState,
                 constraint: GainConstraint, config: SgConfig | None = None):
        self.state = state
        self.bound = bound
        self.constraint = constraint
        self.config = config or SgConfig()
        self._w_eff = state.effective_weights()
        self._w_eff_sq = float(np.real(self._w_eff.conj() @ self._w_eff))

    @classmethod
    def from_scratch(cls, m: int, rank: int, constraint: GainConstraint,
                     alpha: float, beta: float, noise_power: float,
                     config: SgConfig | None = None) -> "JioSmSg":
        state = initial_reduced_state(m, rank, constraint)
        w0 = state.effective_weights()
        bound = BoundState.steady_state(alpha, beta, noise_power,
                                        float(np.real(w0.conj() @ w0)))
        return cls(state, bound, constraint, config)

    @property
    def weights(self) -> np.ndarray:
        return self._w_eff

    @property
    def update_rate(self) -> float:
        return self.bound.update_rate()

    def step(self, x: np.ndarray) -> StepResult:
        a = self.constraint.steering
        transform, w_bar = self.state.transform, self.state.weights
        x_bar = transform.conj().T @ x
        y = complex(w_bar.conj() @ x_bar)
        updated = False
        if self.bound.violates(y) and abs(y) >= MIN_GATED_OUTPUT:
            delta = self.bound.delta
            mu_t = transform_step_size(y, delta, x, w_bar, a,
                                       self.config.projector_normalized)
            transform = transform_update(transform, w_bar, x, y, mu_t, a)
            x_bar2 = transform.conj().T @ x
            y2 = complex(w_bar.conj() @ x_bar2)
            if abs(y2) ** 2 > delta ** 2 and abs(y2) >= MIN_GATED_OUTPUT:
                a_bar = transform.conj().T @ a
                # the reduced projector is identically zero at rank 1, where
                # the whole reduced space is the constraint direction
                if np.real(x_bar2.conj() @ project_out(a_bar, x_bar2)) > \
                        _DEGENERATE_REL * np.real(x_bar2.conj() @ x_bar2):
                    mu_w = weight_step_size(y2, delta, x_bar2, a_bar)
                    w_bar = weight_update(w_bar, x_bar2, y2, mu_w, a_bar)
            self.state.transform = transform
            self.state.weights = w_bar
            self.bound.record_update()
            updated = True
            self._w_eff = self.state.effective_weights()
            self._w_eff_sq = float(np.real(self._w_eff.conj() @ self._w_eff))
        self.bound.advance(self._w_eff_sq)
        return StepResult(updated, y)


class JioSg:
    """Always-updating joint transform/weight adaptation with fixed relative steps.

    The fixed steps are applied through the same projected-power normalization
    as the gated variant (step mu scales the fractional output correction), so
    stability does not depend on the input power level.
    """

    def __init__(self, state: ReducedRankState, constraint: GainConstraint,
                 config: SgConfig | None = None):
        self.state = state
        self.constraint = constraint
        self.config = config or SgConfig()
        self.snapshots_seen = 0

    @classmethod
    def from_scratch(cls, m: int, rank: int, constraint: GainConstraint,
                     config: SgConfig | None = None) -> "JioSg":
        return cls(initial_reduced_state(m, rank, constraint), constraint, config)

    @property
    def weights(self) -> np.ndarray:
        return self.state.effective_weights()

    @property
    def update_rate(self) -> float:
        return 1.0

    def step(self, x: np.ndarray) -> StepResult:
        a = self.constraint.steering
        transform, w_bar = self.state.transform, self.state.weights
        x_bar = transform.conj().T @ x
        y = complex(w_bar.conj() @ x_bar)
        self.snapshots_seen += 1
        if abs(y) >= MIN_GATED_OUTPUT:
            a_bar = transform.conj().T @ a
            w_sq = float(np.real(w_bar.conj() @ w_bar))
            t_power = w_sq * float(np.real(x.conj() @ project_out(a, x)))
            w_power = float(np.real(x_bar.conj() @ project_out(a_bar, x_bar)))
            if t_power > 0.0:
                mu_t = self.config.fixed_step_transform / t_power
                self.state.transform = transform_update(transform, w_bar, x, y, mu_t, a)
            if w_power > 0.0:
                mu_w = self.config.fixed_step_weights / w_power
                self.state.weights = weight_update(w_bar, x_bar, y, mu_w, a_bar)
        return StepResult(True, y)


class FrSmSg:
    """Full-rank data-selective gradient beamformer (rank-m, identity transform)."""

    def __init__(self, weights: np.ndarray, bound: BoundState, constraint: GainConstraint):
        self.w = np.asarray(weights, dtype=complex)
        self.bound = bound
        self.constraint = constraint
        self._w_sq = float(np.real(self.w.conj() @ self.w))

    @classmethod
    def from_scratch(cls, constraint: GainConstraint, alpha: float, beta: float,
                     noise_power: float) -> "FrSmSg":
        w0 = minimal_constrained_weights(constraint)
        bound = BoundState.steady_state(alpha, beta, noise_power,
                                        float(np.real(w0.conj() @ w0)))
        return cls(w0, bound, constraint)

    @property
    def weights(self) -> np.ndarray:
        return self.w

    @property
    def update_rate(self) -> float:
        return self.bound.update_rate()

    def step(self, x: np.ndarray) -> StepResult:
        a = self.constraint.steering
        y = complex(self.w.conj() @ x)
        updated = False
        if self.bound.violates(y) and abs(y) >= MIN_GATED_OUTPUT:
            mu = weight_step_size(y, self.bound.delta, x, a)
            self.w = weight_update(self.w, x, y, mu, a)
            self._w_sq = float(np.real(self.w.conj() @ self.w))
            self.bound.record_update()
            updated = True
        self.bound.advance(self._w_sq)
        return StepResult(updated, y)


class FrSg:
    """Full-rank always-updating gradient beamformer with fixed relative step."""

    def __init__(self, weights: np.ndarray, constraint: GainConstraint,
                 config: SgConfig | None = None):
        self.w = np.asarray(weights, dtype=complex)
        self.constraint = constraint
        self.config = config or SgConfig()
        self.snapshots_seen = 0

    @classmethod
    def from_scratch(cls, constraint: GainConstraint,
                     config: SgConfig | None = None) -> "FrSg":
        return cls(minimal_constrained_weights(constraint), constraint, config)

    @property
    def weights(self) -> np.ndarray:
        return self.w

    @property
    def update_rate(self) -> float:
        return 1.0

    def step(self, x: np.ndarray) -> StepResult:
        a = self.constraint.steering
        y = complex(self.w.conj() @ x)
        self.snapshots_seen += 1
        if abs(y) >= MIN_GATED_OUTPUT:
            power = float(np.real(x.conj() @ project_out(a, x)))
            if power > 0.0:
                mu = self.config.fixed_step_weights / power
                self.w = weight_update(self.w, x, y, mu, a)
        return StepResult(True, y)


def minimal_constrained_weights(constraint: GainConstraint) -> np.ndarray:
    """Minimum-norm weights meeting the gain constraint: gain * a / ||a||^2."""
    a = constraint.steering
    return constraint.gain * a / np.real(a.conj() @ a)
