"""Recursive least-squares beamformers built on rank-one inverse-covariance
updates, with data-selective variants that derive a variable forgetting factor
from the output bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import BoundState
from .gradient import MIN_GATED_OUTPUT, StepResult
from .lcmv import GainConstraint, NumericsError, ReducedRankState, initial_reduced_state

# relative floor (against Cauchy-Schwarz scale) for the forgetting-factor denominator
_DENOM_REL_FLOOR = 1e-12


@dataclass(frozen=True)
class RlsConfig:
    """Regularization and forgetting-factor settings.

    ``rho`` / ``varrho`` seed the full and reduced inverse-covariance states as
    (1/rho) I and (1/varrho) I, so the implied initial covariance is a small
    multiple of the identity that washes out as data accumulates. The variable
    forgetting factor is clipped to [lambda_min, lambda_max]; the fixed-rate
    baselines use ``fixed_forgetting``.
    """

    rho: float = 1.3e-3
    varrho: float = 1.0e-4
    lambda_min: float = 0.1
    lambda_max: float = 0.998
    fixed_forgetting: float = 0.998

    def __post_init__(self):
        if self.rho <= 0 or self.varrho <= 0:
            raise ValueError("regularization constants must be positive")
        if not 0 < self.lambda_min <= self.lambda_max:
            raise ValueError("invalid forgetting-factor clip range")


def riccati_update(P: np.ndarray, x: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-one inverse-covariance update.

    Returns the gain vector k = P x / (1 + lam x^H P x) and the updated
    inverse P' = P - lam k x^H P, which equals (P^-1 + lam x x^H)^-1 in exact
    arithmetic. The result is re-symmetrized to suppress floating-point drift.
    """
    px = P @ x
    quad = float(np.real(x.conj() @ px))
    den = 1.0 + lam * quad
    if den <= 0.0:
        raise NumericsError(
            f"inverse-covariance update lost positive definiteness (1 + lam*q = {den:.3e})")
    k = px / den
    if lam == 0.0:
        return k, P
    P_new = P - lam * np.outer(k, px.conj())
    return k, 0.5 * (P_new + P_new.conj().T)


def min_norm_transform(P: np.ndarray, a: np.ndarray, w_bar_prev: np.ndarray,
                       gain: float) -> np.ndarray:
    """Rank-one transform solving T w_prev = gain P a / (a^H P a) with minimum
    Frobenius norm.

    Every row is a scalar multiple of w_prev^H; among all solutions of the
    defining linear equation, this one minimizes the Frobenius norm.
    """
    w_sq = float(np.real(w_bar_prev.conj() @ w_bar_prev))
    if w_sq == 0.0:
        raise NumericsError("transform update needs nonzero previous reduced weights")
    pa = P @ a
    s = complex(a.conj() @ pa)
    if abs(s) == 0.0:
        raise NumericsError("a^H P a vanished; inverse-covariance state is degenerate")
    v = (gain / s) * pa
    return np.outer(v, w_bar_prev.conj()) / w_sq


def constrained_weights(P: np.ndarray, steering: np.ndarray, gain: float) -> np.ndarray:
    """Minimum-variance weights gain * P a / (a^H P a) for an inverse covariance.

    The denominator is kept as the computed complex scalar so the constraint
    w^H a = gain cancels exactly in floating point.
    """
    u = P @ steering
    s = complex(steering.conj() @ u)
    if abs(s) == 0.0:
        raise NumericsError("a^H P a vanished; cannot form constrained weights")
    return (gain / s) * u


def forgetting_factor_raw(P: np.ndarray, k: np.ndarray, x: np.ndarray, a: np.ndarray,
                          delta: float, gain: float) -> float | None:
    """Raw bound-tracking forgetting factor before clipping.

    Evaluates a^H P z / (a^H k * x^H P z) with z = delta a - gain^2 x and the
    pre-update inverse P. Returns None when the denominator is negligible
    relative to its Cauchy-Schwarz scale (caller falls back to the clip
    maximum). The ratio's imaginary residue is discarded.
    """
    z = delta * a - gain ** 2 * x
    pz = P @ z
    num = complex(a.conj() @ pz)
    ak = complex(a.conj() @ k)
    xpz = complex(x.conj() @ pz)
    den = ak * xpz
    scale = (np.linalg.norm(a) * np.linalg.norm(k)) * (np.linalg.norm(x) * np.linalg.norm(pz))
    if abs(den) <= _DENOM_REL_FLOOR * max(scale, 1e-300):
        return None
    return float(np.real(num / den))


def clip_forgetting(raw: float, config: RlsConfig) -> float:
    return float(min(max(raw, config.lambda_min), config.lambda_max))


class JioSmRls:
    """Joint transform/weight least-squares adaptation with data-selective
    updates and a bound-tracking variable forgetting factor.

    On a gated snapshot: the forgetting factor is evaluated with the pre-update
    inverse and a gain vector formed from the most recent factor (clip maximum
    before the first update), the full inverse-covariance state advances, the
    minimum-norm transform is rebuilt from the previous reduced weights, and
    the reduced inverse and weights follow with the same factor. No-update
    snapshots leave every state bitwise unchanged.
    """

    def __init__(self, state: ReducedRankState, bound: BoundState,
                 constraint: GainConstraint, config: RlsConfig | None = None):
        self.config = config or RlsConfig()
        self.state = state
        self.bound = bound
        self.constraint = constraint
        m, r = state.transform.shape
        self.P = np.eye(m, dtype=complex) / self.config.rho
        self.P_bar = np.eye(r, dtype=complex) / self.config.varrho
        self.last_lambda = 0.0
        self._recent_lambda: float | None = None
        self.denominator_fallbacks = 0
        self._w_eff = state.effective_weights()
        self._w_eff_sq = float(np.real(self._w_eff.conj() @ self._w_eff))

    @classmethod
    def from_scratch(cls, m: int, rank: int, constraint: GainConstraint,
                     alpha: float, beta: float, noise_power: float,
                     config: RlsConfig | None = None) -> "JioSmRls":
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
        cfg = self.config
        a = self.constraint.steering
        gain = self.constraint.gain
        y = complex(self._w_eff.conj() @ x)
        updated = False
        if self.bound.violates(y) and abs(y) >= MIN_GATED_OUTPUT:
            lam_prov = self._recent_lambda if self._recent_lambda is not None else cfg.lambda_max
            k_prov = (self.P @ x) / (1.0 + lam_prov * float(np.real(x.conj() @ self.P @ x)))
            raw = forgetting_factor_raw(self.P, k_prov, x, a, self.bound.delta, gain)
            if raw is None:
                lam = cfg.lambda_max
                self.denominator_fallbacks += 1
            else:
                lam = clip_forgetting(raw, cfg)
            _, self.P = riccati_update(self.P, x, lam)
            w_prev = self.state.weights
            transform = min_norm_transform(self.P, a, w_prev, gain)
            x_bar = transform.conj().T @ x
            a_bar = transform.conj().T @ a
            _, self.P_bar = riccati_update(self.P_bar, x_bar, lam)
            self.state.transform = transform
            self.state.weights = constrained_weights(self.P_bar, a_bar, gain)
            self.last_lambda = lam
            self._recent_lambda = lam
            self.bound.record_update()
            updated = True
            self._w_eff = self.state.effective_weights()
            self._w_eff_sq = float(np.real(self._w_eff.conj() @ self._w_eff))
        else:
            self.last_lambda = 0.0
        self.bound.advance(self._w_eff_sq)
        return StepResult(updated, y)


class JioRls:
    """Always-updating joint least-squares baseline with fixed forgetting."""

    def __init__(self, state: ReducedRankState, constraint: GainConstraint,
                 config: RlsConfig | None = None):
        self.config = config or RlsConfig()
        self.state = state
        self.constraint = constraint
        m, r = state.transform.shape
        self.P = np.eye(m, dtype=complex) / self.config.rho
        self.P_bar = np.eye(r, dtype=complex) / self.config.varrho
        self.snapshots_seen = 0

    @classmethod
    def from_scratch(cls, m: int, rank: int, constraint: GainConstraint,
                     config: RlsConfig | None = None) -> "JioRls":
        return cls(initial_reduced_state(m, rank, constraint), constraint, config)

    @property
    def weights(self) -> np.ndarray:
        return self.state.effective_weights()

    @property
    def update_rate(self) -> float:
        return 1.0

    def step(self, x: np.ndarray) -> StepResult:
        a = self.constraint.steering
        gain = self.constraint.gain
        y = complex(self.state.weights.conj() @ (self.state.transform.conj().T @ x))
        self.snapshots_seen += 1
        lam = self.config.fixed_forgetting
        _, self.P = riccati_update(self.P, x, lam)
        transform = min_norm_transform(self.P, a, self.state.weights, gain)
        x_bar = transform.conj().T @ x
        a_bar = transform.conj().T @ a
        _, self.P_bar = riccati_update(self.P_bar, x_bar, lam)
        self.state.transform = transform
        self.state.weights = constrained_weights(self.P_bar, a_bar, gain)
        return StepResult(True, y)


class FrSmRls:
    """Full-rank data-selective least-squares beamformer."""

    def __init__(self, constraint: GainConstraint, bound: BoundState,
                 config: RlsConfig | None = None):
        self.config = config or RlsConfig()
        self.constraint = constraint
        self.bound = bound
        m = constraint.steering.size
        self.P = np.eye(m, dtype=complex) / self.config.rho
        self.w = constrained_weights(self.P, constraint.steering, constraint.gain)
        self.last_lambda = 0.0
        self._recent_lambda: float | None = None
        self.denominator_fallbacks = 0
        self._w_sq = float(np.real(self.w.conj() @ self.w))

    @classmethod
    def from_scratch(cls, constraint: GainConstraint, alpha: float, beta: float,
                     noise_power: float, config: RlsConfig | None = None) -> "FrSmRls":
        a = constraint.steering
        w0_sq = abs(constraint.gain) ** 2 / float(np.real(a.conj() @ a))
        bound = BoundState.steady_state(alpha, beta, noise_power, w0_sq)
        return cls(constraint, bound, config)

    @property
    def weights(self) -> np.ndarray:
        return self.w

    @property
    def update_rate(self) -> float:
        return self.bound.update_rate()

    def step(self, x: np.ndarray) -> StepResult:
        cfg = self.config
        a = self.constraint.steering
        gain = self.constraint.gain
        y = complex(self.w.conj() @ x)
        updated = False
        if self.bound.violates(y) and abs(y) >= MIN_GATED_OUTPUT:
            lam_prov = self._recent_lambda if self._recent_lambda is not None else cfg.lambda_max
            k_prov = (self.P @ x) / (1.0 + lam_prov * float(np.real(x.conj() @ self.P @ x)))
            raw = forgetting_factor_raw(self.P, k_prov, x, a, self.bound.delta, gain)
            if raw is None:
                lam = cfg.lambda_max
                self.denominator_fallbacks += 1
            else:
                lam = clip_forgetting(raw, cfg)
            _, self.P = riccati_update(self.P, x, lam)
            self.w = constrained_weights(self.P, a, gain)
            self._w_sq = float(np.real(self.w.conj() @ self.w))
            self.last_lambda = lam
            self._recent_lambda = lam
            self.bound.record_update()
            updated = True
        else:
            self.last_lambda = 0.0
        self.bound.advance(self._w_sq)
        return StepResult(updated, y)


class FrRls:
    """Full-rank least-squares baseline with fixed forgetting."""

    def __init__(self, constraint: GainConstraint, config: RlsConfig | None = None):
        self.config = config or RlsConfig()
        self.constraint = constraint
        m = constraint.steering.size
        self.P = np.eye(m, dtype=complex) / self.config.rho
        self.w = constrained_weights(self.P, constraint.steering, constraint.gain)
        self.snapshots_seen = 0

    @property
    def weights(self) -> np.ndarray:
        return self.w

    @property
    def update_rate(self) -> float:
        return 1.0

    def step(self, x: np.ndarray) -> StepResult:
        y = complex(self.w.conj() @ x)
        self.snapshots_seen += 1
        _, self.P = riccati_update(self.P, x, self.config.fixed_forgetting)
        self.w = constrained_weights(self.P, self.constraint.steering, self.constraint.gain)
        return StepResult(True, y)
