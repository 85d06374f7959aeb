"""LCMV filtering primitives: constraint data, rank-reduction state and the
closed-form minimum-variance solutions used as performance bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class NumericsError(RuntimeError):
    """Raised when a linear solve or recursion loses numerical validity."""


@dataclass(frozen=True)
class GainConstraint:
    """Distortionless-response constraint w^H a = gain toward one steering vector."""

    steering: np.ndarray
    gain: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.steering, dtype=complex)
        object.__setattr__(self, "steering", a)
        if not np.any(a):
            raise ValueError("constraint steering vector must be nonzero")
        if self.gain == 0:
            raise ValueError("constraint gain must be nonzero")


@dataclass
class ReducedRankState:
    """Dimension-reducing transform (m x r) and reduced weight vector (r,).

    The effective full-rank filter is ``transform @ weights``; the pair is
    what the adaptive algorithms jointly estimate.
    """

    transform: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.transform = np.asarray(self.transform, dtype=complex)
        self.weights = np.asarray(self.weights, dtype=complex)
        m, r = self.transform.shape
        if not 1 <= r <= m:
            raise ValueError(f"rank must satisfy 1 <= r <= m, got r={r}, m={m}")
        if self.weights.shape != (r,):
            raise ValueError("weights length must equal the transform rank")

    @property
    def rank(self) -> int:
        return self.transform.shape[1]

    def reduce(self, x: np.ndarray) -> np.ndarray:
        """Project a full-rank vector into the reduced domain: T^H x."""
        if x.shape != (self.transform.shape[0],):
            raise ValueError(f"expected vector of length {self.transform.shape[0]}")
        return self.transform.conj().T @ x

    def output(self, x: np.ndarray) -> complex:
        """Array output y = w^H T^H x."""
        return complex(self.weights.conj() @ self.reduce(x))

    def effective_weights(self) -> np.ndarray:
        """Full-rank filter T w realized by the current pair."""
        return self.transform @ self.weights


def initial_reduced_state(m: int, rank: int, constraint: GainConstraint) -> ReducedRankState:
    """Canonical start: identity-column transform, weights meeting the constraint.

    T(0) is the first ``rank`` columns of I_m and w(0) = gain * a_r / ||a_r||^2
    with a_r = T(0)^H a, so w^H T^H a = gain holds at time zero.
    """
    transform = np.eye(m, rank, dtype=complex)
    a_bar = transform.conj().T @ constraint.steering
    weights = constraint.gain * a_bar / np.real(a_bar.conj() @ a_bar)
    return ReducedRankState(transform=transform, weights=weights)


def optimal_full_rank(covariance: np.ndarray, constraint: GainConstraint) -> np.ndarray:
    """Closed-form minimum-variance weights gain * R^-1 a / (a^H R^-1 a).

    Solves with a Hermitian positive-definite factorization; a singular or
    indefinite covariance raises ``NumericsError`` with its condition number.
    """
    a = constraint.steering
    try:
        u = scipy.linalg.solve(covariance, a, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(covariance)
        raise NumericsError(f"covariance solve failed (cond={cond:.3e}): {exc}") from exc
    # keeping the (numerically near-real) scalar complex makes w^H a = gain
    # cancel exactly in floating point
    return constraint.gain * u / (a.conj() @ u)


def optimal_reduced_rank(covariance_r: np.ndarray, steering_r: np.ndarray,
                         gain: float = 1.0) -> np.ndarray:
    """Reduced-domain counterpart of :func:`optimal_full_rank`."""
    return optimal_full_rank(covariance_r, GainConstraint(steering=steering_r, gain=gain))
