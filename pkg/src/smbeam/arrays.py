"""Uniform linear array signal model: steering vectors, snapshots, covariances.

The received vector at one time instant is x = sum_k B_k b_k a(theta_k) + n,
with BPSK symbols b_k in {+1, -1}, per-source amplitudes B_k, plane-wave
steering vectors a(theta_k) and circularly-symmetric complex Gaussian noise n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ScenarioError(ValueError):
    """Raised for inconsistent array or source configurations."""


@dataclass(frozen=True)
class UlaConfig:
    """Uniform linear array geometry.

    Parameters
    ----------
    num_elements : int
        Number of sensor elements (m >= 1).
    element_spacing : float
        Inter-element distance in carrier wavelengths (default half wavelength).
    """

    num_elements: int
    element_spacing: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise ScenarioError(f"num_elements must be >= 1, got {self.num_elements}")
        if self.element_spacing <= 0:
            raise ScenarioError(f"element_spacing must be > 0, got {self.element_spacing}")


@dataclass(frozen=True)
class SourceSpec:
    """One far-field narrowband source.

    ``amplitude`` is the linear amplitude B_k; the transmitted data at each
    snapshot is B_k * b_k with b_k a BPSK symbol.
    """

    doa_deg: float
    amplitude: float
    is_soi: bool = False

    def __post_init__(self):
        if not 0.0 < self.doa_deg < 180.0:
            raise ScenarioError(f"DOA must lie in (0, 180) degrees, got {self.doa_deg}")
        if self.amplitude <= 0:
            raise ScenarioError(f"amplitude must be > 0, got {self.amplitude}")


@dataclass(frozen=True)
class ChangeEvent:
    """Source population change applied from ``snapshot_index`` onward."""

    snapshot_index: int
    add: tuple[SourceSpec, ...] = ()
    remove_doas: tuple[float, ...] = ()


@dataclass(frozen=True)
class SourceScenario:
    """Signal environment: sources, noise power and optional change events."""

    sources: tuple[SourceSpec, ...]
    noise_power: float
    change_events: tuple[ChangeEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        object.__setattr__(self, "change_events", tuple(self.change_events))
        if self.noise_power <= 0:
            raise ScenarioError(f"noise_power must be > 0, got {self.noise_power}")
        _check_sources(self.sources)
        indices = [ev.snapshot_index for ev in self.change_events]
        if indices != sorted(indices):
            raise ScenarioError("change_events must be sorted by snapshot index")
        # every event must leave a valid population with the SOI still present
        for idx in indices:
            _check_sources(self.sources_at(idx))

    @property
    def soi(self) -> SourceSpec:
        return next(s for s in self.sources if s.is_soi)

    def sources_at(self, snapshot_index: int) -> tuple[SourceSpec, ...]:
        """Source population in effect at the given snapshot."""
        active = list(self.sources)
        for ev in self.change_events:
            if ev.snapshot_index > snapshot_index:
                break
            active = [s for s in active if s.doa_deg not in ev.remove_doas]
            active.extend(ev.add)
        return tuple(active)

    def segment_boundaries(self, num_snapshots: int) -> list[tuple[int, int]]:
        """Half-open [start, stop) ranges over which the population is constant."""
        cuts = [0] + [ev.snapshot_index for ev in self.change_events
                      if 0 < ev.snapshot_index < num_snapshots] + [num_snapshots]
        return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]


def _check_sources(sources) -> None:
    if sum(s.is_soi for s in sources) != 1:
        raise ScenarioError("exactly one source must have is_soi=True")
    doas = [s.doa_deg for s in sources]
    if len(set(doas)) != len(doas):
        raise ScenarioError("source DOAs must be pairwise distinct")


@dataclass(frozen=True)
class Snapshot:
    """One received vector with the symbols that generated it."""

    received: np.ndarray
    symbols: np.ndarray
    desired_symbol: float


def steering_vector(cfg: UlaConfig, doa_deg: float) -> np.ndarray:
    """Plane-wave steering vector for a DOA given in degrees.

    Element p (0-based) equals exp(-2j*pi*p*spacing*cos(doa)); the first
    element is 1 and the squared norm is the number of elements.
    """
    if not 0.0 < doa_deg < 180.0:
        raise ScenarioError(f"DOA must lie in (0, 180) degrees, got {doa_deg}")
    phase = -2.0 * np.pi * cfg.element_spacing * np.cos(np.deg2rad(doa_deg))
    return np.exp(1j * phase * np.arange(cfg.num_elements))


def steering_matrix(cfg: UlaConfig, sources) -> np.ndarray:
    """Stack steering vectors of the given sources as columns (m x q)."""
    if not sources:
        return np.zeros((cfg.num_elements, 0), dtype=complex)
    return np.column_stack([steering_vector(cfg, s.doa_deg) for s in sources])


def generate_snapshots(cfg: UlaConfig, sources, noise_power: float,
                       rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw a batch of received vectors.

    Returns
    -------
    received : (m, count) complex ndarray
    symbols : (q, count) float ndarray of BPSK symbols in {+1, -1}
    """
    m, q = cfg.num_elements, len(sources)
    mix = steering_matrix(cfg, sources) * np.array([s.amplitude for s in sources])
    symbols = rng.integers(0, 2, size=(q, count)) * 2.0 - 1.0
    scale = np.sqrt(noise_power / 2.0)
    noise = scale * (rng.standard_normal((m, count)) + 1j * rng.standard_normal((m, count)))
    return mix @ symbols + noise, symbols


def generate_snapshot(cfg: UlaConfig, sources, noise_power: float,
                      rng: np.random.Generator) -> Snapshot:
    """Draw one snapshot; the desired symbol is B_0 * b_0 of the SOI."""
    received, symbols = generate_snapshots(cfg, sources, noise_power, rng, 1)
    soi_idx = next(i for i, s in enumerate(sources) if s.is_soi)
    desired = sources[soi_idx].amplitude * symbols[soi_idx, 0]
    return Snapshot(received=received[:, 0], symbols=symbols[:, 0], desired_symbol=desired)


def true_covariance(cfg: UlaConfig, sources, noise_power: float) -> np.ndarray:
    """Analytic covariance sum_k B_k^2 a_k a_k^H + noise_power * I."""
    m = cfg.num_elements
    r = noise_power * np.eye(m, dtype=complex)
    for s in sources:
        a = steering_vector(cfg, s.doa_deg)
        r += s.amplitude ** 2 * np.outer(a, a.conj())
    return r


def interference_noise_covariance(cfg: UlaConfig, sources, noise_power: float) -> np.ndarray:
    """Covariance with the SOI term removed; used by the SINR metric."""
    return true_covariance(
        cfg, [s for s in sources if not s.is_soi], noise_power)


def draw_interferer_doas(rng: np.random.Generator, count: int,
                         forbidden: tuple[float, ...] = (),
                         min_separation: float = 0.5) -> list[float]:
    """Draw distinct DOAs uniform on (0, 180), keeping a minimum separation.

    ``forbidden`` lists DOAs (e.g. the SOI's) the draws must also stay away
    from, which keeps the stacked steering vectors well conditioned.
    """
    taken = list(forbidden)
    out: list[float] = []
    while len(out) < count:
        cand = rng.uniform(0.0, 180.0)
        if cand <= 0.0 or cand >= 180.0:
            continue
        if all(abs(cand - t) >= min_separation for t in taken):
            out.append(cand)
            taken.append(cand)
    return out
