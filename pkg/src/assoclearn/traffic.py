"""Per-slot demand traces and the period/zone/window calendar.

Slots are numbered 1..T throughout; zone ids are 1..K. The horizon splits
into P periods of K zones, each zone holding Z consecutive slots per
period, and window k collects zone k's slots across all periods.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrafficTrace:
    """demand[t-1, i] is the intensity requested at location i during slot t."""

    demand: np.ndarray  # (horizon, n_locations), packets/second, >= 0

    def __post_init__(self):
        demand = np.asarray(self.demand, dtype=float)
        if demand.ndim != 2:
            raise ValueError("demand must be a horizon x n_locations matrix")
        if not np.all(np.isfinite(demand)) or np.any(demand < 0):
            raise ValueError("demand entries must be finite and non-negative")
        demand = demand.copy()
        demand.setflags(write=False)
        object.__setattr__(self, "demand", demand)

    @property
    def horizon(self) -> int:
        return self.demand.shape[0]

    @property
    def n_locations(self) -> int:
        return self.demand.shape[1]

    @property
    def max_intensity(self) -> float:
        return float(self.demand.max()) if self.demand.size else 0.0


@dataclass(frozen=True)
class TimePartition:
    """Calendar with horizon = periods * zones * slots_per_zone, slots 1-based."""

    periods: int
    zones: int
    slots_per_zone: int

    def __post_init__(self):
        for name in ("periods", "zones", "slots_per_zone"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive count")

    @property
    def horizon(self) -> int:
        return self.periods * self.zones * self.slots_per_zone

    def window(self, k: int) -> np.ndarray:
        """Ordered 1-based slots of zone k across all periods."""
        if not 1 <= k <= self.zones:
            raise IndexError(f"zone {k} outside 1..{self.zones}")
        kz = self.zones * self.slots_per_zone
        starts = kz * np.arange(self.periods) + self.slots_per_zone * (k - 1)
        return (starts[:, None] + np.arange(1, self.slots_per_zone + 1)[None, :]).ravel()

    def windows(self) -> list[np.ndarray]:
        return [self.window(k) for k in range(1, self.zones + 1)]


def build_partition(horizon: int, zones: int, slots_per_zone: int) -> TimePartition:
    """Partition the horizon; rejects horizons that leave a partial period."""
    if horizon <= 0 or zones <= 0 or slots_per_zone <= 0:
        raise ValueError("horizon, zones and slots_per_zone must be positive")
    block = zones * slots_per_zone
    if horizon % block != 0:
        raise ValueError(
            f"horizon {horizon} is not divisible by zones*slots_per_zone = {block}"
        )
    return TimePartition(periods=horizon // block, zones=zones, slots_per_zone=slots_per_zone)


def window_of(partition: TimePartition, t: int) -> tuple[int, int, bool]:
    """Locate slot t: (zone k, 1-based rank inside window k, first-of-window flag)."""
    if not 1 <= t <= partition.horizon:
        raise IndexError(f"slot {t} outside 1..{partition.horizon}")
    z = partition.slots_per_zone
    zone = ((t - 1) // z) % partition.zones + 1
    period = (t - 1) // (partition.zones * z) + 1
    rank = (period - 1) * z + (t - 1) % z + 1
    return zone, rank, rank == 1


@dataclass(frozen=True)
class SyntheticProfile:
    """Shape parameters of the periodic synthetic generator.

    Intensities follow base_i * shape(time of day) * (1 + noise) with noise
    uniform in [-sigma, sigma]; sigma < 1 keeps everything positive before
    the final clamp at zero.
    """

    slots_per_day: int
    base_min: float = 0.5
    base_max: float = 1.5
    shape: str = "sinusoidal"  # or "flat"
    amplitude: float = 0.6
    sigma: float = 0.1

    def __post_init__(self):
        if self.slots_per_day < 1:
            raise ValueError("slots_per_day must be a positive count")
        if not 0 < self.base_min <= self.base_max:
            raise ValueError("base intensities must satisfy 0 < base_min <= base_max")
        if self.shape not in ("sinusoidal", "flat"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if not 0 <= self.amplitude <= 1:
            raise ValueError("amplitude must lie in [0, 1]")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")


def generate_synthetic(
    n_locations: int, horizon: int, seed: int, profile: SyntheticProfile
) -> TrafficTrace:
    """Reproducible periodic demand; identical output for identical arguments."""
    if horizon <= 0 or n_locations <= 0:
        raise ValueError("horizon and n_locations must be positive")
    rng = np.random.default_rng(seed)
    base = rng.uniform(profile.base_min, profile.base_max, n_locations)
    day_phase = (np.arange(horizon) % profile.slots_per_day) / profile.slots_per_day
    if profile.shape == "sinusoidal":
        shape = 1.0 + profile.amplitude * np.sin(2.0 * np.pi * day_phase)
    else:
        shape = np.ones(horizon)
    noise = rng.uniform(-profile.sigma, profile.sigma, (horizon, n_locations))
    demand = np.maximum(0.0, base[None, :] * shape[:, None] * (1.0 + noise))
    return TrafficTrace(demand=demand)


TRACE_HEADER = ("t", "location_id", "intensity")


def save_trace_csv(trace: TrafficTrace, path) -> None:
    """Write `t,location_id,intensity` rows (1-based ids), zeros omitted."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        ts, locs = np.nonzero(trace.demand)
        for t, i in zip(ts, locs):
            writer.writerow([t + 1, i + 1, repr(float(trace.demand[t, i]))])


def load_trace_csv(path, n_locations: int, horizon: int | None = None) -> TrafficTrace:
    """Read a `t,location_id,intensity` file; missing pairs default to 0.

    The horizon is inferred as the largest slot id unless given explicitly.
    Malformed rows raise with the offending 1-based line number.
    """
    if n_locations <= 0:
        raise ValueError("n_locations must be positive")
    entries = []
    max_t = 0
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and tuple(row) == TRACE_HEADER):
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
            try:
                t = int(row[0])
                loc = int(row[1])
                value = float(row[2])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-numeric field ({exc})") from None
            if t < 1:
                raise ValueError(f"line {lineno}: slot id {t} must be >= 1")
            if not 1 <= loc <= n_locations:
                raise ValueError(
                    f"line {lineno}: location_id {loc} outside 1..{n_locations}"
                )
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"line {lineno}: intensity {value} must be >= 0")
            entries.append((t, loc, value))
            max_t = max(max_t, t)

    if horizon is None:
        if max_t == 0:
            raise ValueError("cannot infer horizon from an empty trace file")
        horizon = max_t
    elif max_t > horizon:
        raise ValueError(f"slot id {max_t} exceeds declared horizon {horizon}")

    demand = np.zeros((horizon, n_locations))
    for t, loc, value in entries:
        demand[t - 1, loc - 1] = value
    return TrafficTrace(demand=demand)
