"""Analytical instruments: per-algorithm arithmetic-cost formulas, SINR/MSE
metrics, an MSE-trend predictor for the data-selective gradient beamformer,
and stability / Hessian diagnostics of the bounded optimization problem."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .arrays import UlaConfig, interference_noise_covariance, steering_vector, true_covariance
from .gradient import MIN_GATED_OUTPUT, project_out
from .lcmv import GainConstraint, ReducedRankState, optimal_full_rank, optimal_reduced_rank

# ---------------------------------------------------------------------------
# arithmetic-cost model (complex additions / multiplications over N snapshots;
# tau is the fraction of snapshots with a parameter update)
# ---------------------------------------------------------------------------

_F = Fraction
_CostFn = Callable[[Fraction, Fraction, Fraction, Fraction], Fraction]

_COMPLEXITY_TABLE: dict[str, tuple[_CostFn, _CostFn]] = {
    "fr-sg": (
        lambda m, r, n, t: n * (3 * m - 1),
        lambda m, r, n, t: n * (4 * m + 1),
    ),
    "fr-sm-sg": (
        lambda m, r, n, t: 2 * n * m + 3 * t * n * m,
        lambda m, r, n, t: n * (2 * m + 5) + t * n * (4 * m + 3),
    ),
    "fr-rls": (
        lambda m, r, n, t: n * (4 * m ** 2 - m - 1),
        lambda m, r, n, t: n * (5 * m ** 2 + 5 * m - 1),
    ),
    "fr-sm-rls": (
        lambda m, r, n, t: 2 * n * m + t * n * (4 * m ** 2 - 1),
        lambda m, r, n, t: n * (2 * m + 5) + t * n * (5 * m ** 2 + 6 * m + 2),
    ),
    "mswf-sg": (
        lambda m, r, n, t: n * (r * m ** 2 + (r + 1) * m + 2 * r - 2),
        lambda m, r, n, t: n * (r * m ** 2 + 2 * r * m + 5 * r + 2),
    ),
    "mswf-rls": (
        lambda m, r, n, t: n * (r * m ** 2 + (r + 1) * m + 4 * r ** 2 - 3 * r - 1),
        lambda m, r, n, t: n * ((r + 1) * m ** 2 + 2 * r * m + 5 * r ** 2 + 4 * r),
    ),
    "avf": (
        lambda m, r, n, t: n * ((4 * r + 5) * m ** 2 + (r - 1) * m - 2 * r - 1),
        lambda m, r, n, t: n * ((5 * r + 8) * m ** 2 + (3 * r + 2) * m),
    ),
    "jio-sg": (
        lambda m, r, n, t: n * (4 * r * m + m + 2 * r - 3),
        lambda m, r, n, t: n * (4 * r * m + m + 7 * r + 3),
    ),
    "jio-sm-sg": (
        lambda m, r, n, t: 2 * n * r * m + t * n * (3 * r * m + 2 * m + 2 * r - 4),
        lambda m, r, n, t: n * (2 * r * m + m + r + 5) + t * n * (3 * r * m + 2 * m + 8 * r + 7),
    ),
    "jio-rls": (
        lambda m, r, n, t: n * (4 * m ** 2 + (2 * r - 1) * m + 4 * r ** 2 - 4 * r - 1),
        lambda m, r, n, t: n * (5 * m ** 2 + (3 * r + 3) * m + 6 * r ** 2 + 4 * r),
    ),
    "jio-sm-rls": (
        lambda m, r, n, t: 2 * n * m * r + t * n * (4 * m ** 2 + r * m + m + 4 * r ** 2 - 6 * r - 1),
        lambda m, r, n, t: n * (2 * r * m + m + r + 5) + t * n * (5 * m ** 2 + 2 * r * m + 5 * m + 6 * r ** 2 + 3 * r + 3),
    ),
}

COMPLEXITY_TAGS = tuple(sorted(_COMPLEXITY_TABLE))


def _as_fraction(value) -> Fraction:
    # floats go through their decimal string so 0.15 means 3/20, not the
    # nearest binary fraction; keeps the cost formulas exact
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


def complexity_count(tag: str, m: int, r: int, num_snapshots: int, tau=1):
    """Exact complex-arithmetic cost of one algorithm over ``num_snapshots``.

    Returns ``(additions, multiplications)`` as exact integers (Fractions if
    a non-integral update rate makes them fractional). ``tau`` in (0, 1] only
    affects the data-selective rows.
    """
    key = tag.lower()
    if key not in _COMPLEXITY_TABLE:
        raise KeyError(f"unknown algorithm tag {tag!r}; known: {', '.join(COMPLEXITY_TAGS)}")
    if m < 1 or r < 1 or num_snapshots < 1:
        raise ValueError("m, r and num_snapshots must be positive")
    t = _as_fraction(tau)
    if not 0 < t <= 1:
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    add_fn, mul_fn = _COMPLEXITY_TABLE[key]
    args = (_F(m), _F(r), _F(num_snapshots), t)
    out = []
    for val in (add_fn(*args), mul_fn(*args)):
        out.append(int(val) if val.denominator == 1 else val)
    return tuple(out)


# ---------------------------------------------------------------------------
# empirical metrics
# ---------------------------------------------------------------------------

def output_sinr_db(weights: np.ndarray, cfg: UlaConfig, sources, noise_power: float) -> float:
    """Output SINR of a beamformer against the analytic covariances, in dB."""
    w = np.asarray(weights, dtype=complex)
    if not np.any(w):
        raise ValueError("weights must be nonzero")
    soi = next(s for s in sources if s.is_soi)
    a0 = steering_vector(cfg, soi.doa_deg)
    r_in = interference_noise_covariance(cfg, sources, noise_power)
    signal = soi.amplitude ** 2 * abs(w.conj() @ a0) ** 2
    floor = float(np.real(w.conj() @ (r_in @ w)))
    if signal == 0.0:
        return -np.inf
    return float(10.0 * np.log10(signal / floor))


def empirical_mse(desired, output):
    """Squared estimation-error magnitude |d - y|^2 (elementwise on arrays)."""
    return np.abs(np.asarray(desired) - np.asarray(output)) ** 2


def mmse(w_opt: np.ndarray, covariance: np.ndarray, steering: np.ndarray,
         desired_power: float = 1.0) -> float:
    """Minimum MSE of the optimal constrained filter.

    Evaluates E|d|^2 - w^H a - a^H w + w^H R w; the cross terms carry no
    amplitude factor, so the value is the statistical MMSE when the desired
    source has unit amplitude (the scenario builders normalize the SOI that
    way).
    """
    w = np.asarray(w_opt, dtype=complex)
    a = np.asarray(steering, dtype=complex)
    cross = w.conj() @ a
    value = desired_power - cross - np.conj(cross) + w.conj() @ (covariance @ w)
    return float(np.real(value))


def gaussian_tail(x: float) -> float:
    """Upper-tail probability of the standard normal, via erfc."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def update_probability(delta: float, noise_std: float, p_min: float) -> float:
    """Model of the per-snapshot update probability: 2 Q(delta/sigma) + p_min."""
    if noise_std <= 0:
        raise ValueError("noise_std must be positive")
    return 2.0 * gaussian_tail(delta / noise_std) + p_min


# ---------------------------------------------------------------------------
# MSE-trend predictor
# ---------------------------------------------------------------------------

class PredictedMse(NamedTuple):
    jmse: np.ndarray          # predicted MSE per snapshot
    emse: np.ndarray          # excess component sigma_x^2 * tr(second moment)
    jmin: float
    sigma_x_sq: float


def predict_mse_trajectory(cfg: UlaConfig, sources, noise_power: float, *,
                           rank: int, alpha: float, beta: float, p_min: float,
                           horizon: int, ensemble: int = 100,
                           rng: np.random.Generator, gain: float = 1.0,
                           projector_normalized: bool = True,
                           sigma_x_sq: float | None = None,
                           initial_error: np.ndarray | None = None) -> PredictedMse:
    """Propagate the weight-error recursion of the data-selective gradient
    beamformer over an ensemble of snapshot streams and return the MSE trend.

    Each trajectory draws its own snapshots; the error vector evolves as
    e <- (I - V) e - V w_opt + step_scalar * G gbar, where V and step_scalar
    combine the gated fractional correction (1 - delta/|y|) with the update
    probability 2Q(delta/sigma_n) + p_min, and the update-direction quantities
    are evaluated at the canonical initial transform/weight operating point.
    The predicted MSE is jmin + sigma_x^2 * tr of the ensemble second moment
    of e (the excess-error trace approximation).
    """
    from .arrays import generate_snapshots

    soi = next(s for s in sources if s.is_soi)
    a = steering_vector(cfg, soi.doa_deg)
    constraint = GainConstraint(steering=a, gain=gain)
    covariance = true_covariance(cfg, sources, noise_power)
    w_opt = optimal_full_rank(covariance, constraint)
    jmin = mmse(w_opt, covariance, a, soi.amplitude ** 2)
    if sigma_x_sq is None:
        sigma_x_sq = float(sum(s.amplitude ** 2 for s in sources))

    m = cfg.num_elements
    transform = np.eye(m, rank, dtype=complex)
    a_bar = transform.conj().T @ a
    w_bar_opt = optimal_reduced_rank(transform.conj().T @ covariance @ transform, a_bar, gain)
    w_bar_sq = float(np.real(w_bar_opt.conj() @ w_bar_opt))
    w_start = gain * a_bar / np.real(a_bar.conj() @ a_bar)
    if initial_error is None:
        e0 = transform @ w_start - w_opt
    else:
        e0 = np.asarray(initial_error, dtype=complex)
    noise_std = math.sqrt(noise_power)
    delta0 = math.sqrt(alpha * float(np.real((transform @ w_start).conj() @ (transform @ w_start)))
                       * noise_power)

    err_sq = np.zeros((ensemble, horizon))
    for t in range(ensemble):
        received, _ = generate_snapshots(cfg, sources, noise_power, rng, horizon)
        e = e0.copy()
        delta = delta0
        for i in range(horizon):
            x = received[:, i]
            w = w_opt + e
            y = complex(w.conj() @ x)
            mag = abs(y)
            if mag ** 2 > delta ** 2 and mag >= MIN_GATED_OUTPUT:
                frac = 1.0 - delta / mag
                pe = update_probability(delta, noise_std, p_min)
                if projector_normalized:
                    u = project_out(a, x)
                else:
                    u = x - a * (a.conj() @ x)
                u_power = float(np.real(x.conj() @ u))
                x_bar = transform.conj().T @ x
                gbar = project_out(a_bar, x_bar)
                gbar_power = float(np.real(x_bar.conj() @ gbar))
                if u_power > 0.0 and gbar_power > 0.0:
                    ystar = np.conj(y)
                    # -V w: the V(i) operator applied to w_opt + e
                    e = e - (pe * frac * ystar) * (u / u_power
                                                   + (transform @ gbar) / gbar_power)
                    # + step_scalar * G gbar (second-order joint-update term)
                    step_scalar = (pe ** 2) * (ystar ** 2) * (frac ** 2) / (
                        w_bar_sq * u_power * gbar_power)
                    e = e + step_scalar * u * (w_bar_opt.conj() @ gbar)
            err_sq[t, i] = float(np.real(e.conj() @ e))
            w_now_sq = float(np.real((w_opt + e).conj() @ (w_opt + e)))
            delta = beta * delta + (1.0 - beta) * math.sqrt(alpha * w_now_sq * noise_power)

    emse = sigma_x_sq * err_sq.mean(axis=0)
    return PredictedMse(jmse=jmin + emse, emse=emse, jmin=jmin, sigma_x_sq=sigma_x_sq)


# ---------------------------------------------------------------------------
# stability diagnostic
# ---------------------------------------------------------------------------

class StabilityReport(NamedTuple):
    matrix: np.ndarray        # block-diagonal contraction operator
    spectral_radius: float    # largest singular value
    max_eig_gram: float       # largest eigenvalue of U^H U
    within_unit: bool


def stability_matrix(x: np.ndarray, state: ReducedRankState, delta: float,
                     constraint: GainConstraint, tol: float = 1e-6) -> StabilityReport:
    """Per-snapshot error-contraction operator of the gated gradient updates.

    Builds the transform-error and weight-error blocks on the subspaces the
    updates actually explore (the range of the constraint projector and the
    constraint hyperplane, respectively), where the bound-derived step exposes
    the contraction factor 1 - delta/|y|. Both blocks use the same snapshot
    and the same gate. With the gate closed the operator is the identity and
    the radius is exactly 1.
    """
    a = constraint.steering
    m, r = state.transform.shape
    y = state.output(x)
    mag = abs(y)
    if mag ** 2 > delta ** 2 and mag >= MIN_GATED_OUTPUT:
        frac = 1.0 - delta / mag
    else:
        frac = 0.0

    u1 = np.eye(m, dtype=complex)
    u2 = np.eye(r, dtype=complex)
    if frac > 0.0:
        u = project_out(a, x)
        power = float(np.real(x.conj() @ u))
        if power > 0.0:
            u1 -= frac * np.outer(u, u.conj()) / power
        x_bar = state.transform.conj().T @ x
        a_bar = state.transform.conj().T @ a
        if np.any(a_bar):
            g = project_out(a_bar, x_bar)
            g_power = float(np.real(x_bar.conj() @ g))
            if g_power > 0.0:
                u2 -= frac * np.outer(g, g.conj()) / g_power

    full = np.zeros((m + r, m + r), dtype=complex)
    full[:m, :m] = u1
    full[m:, m:] = u2
    svals = np.linalg.svd(full, compute_uv=False)
    radius = float(svals[0])
    max_gram = radius ** 2
    return StabilityReport(matrix=full, spectral_radius=radius,
                           max_eig_gram=max_gram, within_unit=max_gram <= 1.0 + tol)


# ---------------------------------------------------------------------------
# Hessian diagnostic of the bounded optimization problem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HessianReport:
    h0: np.ndarray
    h0_prime: np.ndarray
    min_eigenvalue: float
    is_psd: bool
    realizations: int
    exhaustive: bool


def _hermitian_part(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def _symbol_terms(f_vectors: list[np.ndarray], symbols: np.ndarray, r: int):
    """H01/H02/H03 blocks for one symbol realization (index 0 is the SOI)."""
    dim = 2 * r
    lower = np.zeros((dim, dim), dtype=complex)
    lower[r:, :r] = np.eye(r)

    def smat(s):
        return s * lower

    f0 = f_vectors[0]
    s0 = smat(symbols[0])
    v1 = s0 @ f0
    v2 = s0.conj().T @ f0
    h01 = np.outer(v1, v1.conj()) + np.outer(v2, v2.conj())
    c0 = complex(f0.conj() @ (s0 @ f0))
    h02 = np.conj(c0) * s0 + c0 * s0.conj().T
    h03 = np.zeros((dim, dim), dtype=complex)
    for k in range(1, len(f_vectors)):
        sk = smat(symbols[k])
        ck = complex(f_vectors[k].conj() @ (sk @ f_vectors[k]))
        h03 += np.conj(ck) * sk + ck * sk.conj().T
    return h01, h02, h03


def hessian_condition(state: ReducedRankState, cfg: UlaConfig, sources,
                      lam: float, gain: float = 1.0, *,
                      max_enumeration: int = 10, sample_count: int = 512,
                      rng: np.random.Generator | None = None,
                      psd_tol: float = 1e-10) -> HessianReport:
    """Curvature test of the bounded output-power objective at one operating
    point (noise-free construction).

    Assembles the desired-source curvature blocks from the stacked
    weight/transformed-steering coordinates, averages over the BPSK symbol
    ensemble (exhaustively up to ``max_enumeration`` sources, sampled beyond),
    and reports whether the multiplier-weighted reduced form is positive
    semi-definite.
    """
    r = state.rank
    soi_first = sorted(sources, key=lambda s: not s.is_soi)
    amplitudes = np.array([s.amplitude for s in soi_first])
    f_vectors = []
    for s in soi_first:
        a_k = steering_vector(cfg, s.doa_deg)
        f_vectors.append(np.concatenate([state.weights.conj(),
                                         state.transform.T @ a_k.conj()]))

    q = len(soi_first)
    if q <= max_enumeration:
        patterns = [np.array(bits) for bits in itertools.product((1.0, -1.0), repeat=q)]
        exhaustive = True
    else:
        if rng is None:
            rng = np.random.default_rng(0)
        patterns = list(rng.integers(0, 2, size=(sample_count, q)) * 2.0 - 1.0)
        exhaustive = False

    dim = 2 * r
    sum_h01 = np.zeros((dim, dim), dtype=complex)
    sum_h02 = np.zeros((dim, dim), dtype=complex)
    sum_h03 = np.zeros((dim, dim), dtype=complex)
    for bits in patterns:
        h01, h02, h03 = _symbol_terms(f_vectors, amplitudes * bits, r)
        sum_h01 += h01
        sum_h02 += h02
        sum_h03 += h03
    count = len(patterns)
    e_h01, e_h02, e_h03 = sum_h01 / count, sum_h02 / count, sum_h03 / count

    h0 = e_h01 + e_h02 + 2.0 * lam * _hermitian_part(e_h01 + e_h02 + e_h03)
    h0_prime = e_h02 + 2.0 * lam * _hermitian_part(e_h02 + e_h03)
    eigs = np.linalg.eigvalsh(_hermitian_part(h0_prime))
    min_eig = float(eigs[0])
    scale = max(1.0, float(np.linalg.norm(h0_prime)))
    return HessianReport(h0=h0, h0_prime=h0_prime, min_eigenvalue=min_eig,
                         is_psd=min_eig >= -psd_tol * scale,
                         realizations=count, exhaustive=exhaustive)


def soi_curvature_term(state: ReducedRankState, cfg: UlaConfig, source,
                       symbol: float) -> np.ndarray:
    """The always-PSD desired-source curvature block for one realization."""
    a_k = steering_vector(cfg, source.doa_deg)
    f0 = np.concatenate([state.weights.conj(), state.transform.T @ a_k.conj()])
    h01, _, _ = _symbol_terms([f0], np.array([source.amplitude * symbol]), state.rank)
    return h01


def optimal_transform(covariance: np.ndarray, steering: np.ndarray,
                      w_bar_opt: np.ndarray, gain: float = 1.0) -> np.ndarray:
    """Closed-form rank-one reference transform pairing the covariance-weighted
    steering direction with the optimal reduced weights (diagnostic use)."""
    ra = covariance @ steering
    s = complex(steering.conj() @ ra)
    w_sq = float(np.real(w_bar_opt.conj() @ w_bar_opt))
    return np.outer((gain / s) * ra, w_bar_opt.conj()) / w_sq
