"""Simulated antenna plant and beacon receiver.

The plant is a pair of slew-rate-limited axes with resolver-quantized
readback; the receiver turns the ideal beacon surface into a noisy,
floor-clamped dB reading and a 0-10 V telemetry voltage.

State values are immutable; ``command`` and ``tick`` return updated
copies. The simulation loop advances the plant with a fixed base step
equal to the receiver sampling interval (20 ms by default), so ``tick``
is normally called with that dt or a multiple of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .beacon import ParabolaParams, beacon_level

# 16-bit resolver-to-digital conversion, in degrees per count.
DEFAULT_RESOLVER_STEP = 360.0 / 65536.0


class AxisLimitError(ValueError):
    """Commanded or configured angle falls outside an axis travel range."""


@dataclass(frozen=True)
class AntennaState:
    true_azimuth: float  # deg
    true_elevation: float  # deg
    target_azimuth: float  # deg
    target_elevation: float  # deg
    az_slew_rate: float = 1.0  # deg/s
    el_slew_rate: float = 1.0  # deg/s
    az_limits: tuple[float, float] = (0.0, 360.0)
    el_limits: tuple[float, float] = (5.0, 90.0)
    resolver_step: float = DEFAULT_RESOLVER_STEP  # deg per count

    def __post_init__(self) -> None:
        if self.az_slew_rate <= 0 or self.el_slew_rate <= 0:
            raise ValueError("slew rates must be positive")
        if self.resolver_step <= 0:
            raise ValueError("resolver_step must be positive")
        for name, value, (lo, hi) in (
            ("true_azimuth", self.true_azimuth, self.az_limits),
            ("target_azimuth", self.target_azimuth, self.az_limits),
            ("true_elevation", self.true_elevation, self.el_limits),
            ("target_elevation", self.target_elevation, self.el_limits),
        ):
            if not lo <= value <= hi:
                raise AxisLimitError(f"{name}={value} outside limits [{lo}, {hi}]")


@dataclass(frozen=True)
class ReceiverConfig:
    """Beacon receiver calibration and disturbance model.

    ``floor_db`` is the clamp below which the receiver reports nothing
    lower; the 0-10 V telemetry output maps ``floor_db`` to 0 V and
    ``max_db`` to 10 V. Slow sinusoidal drift stands in for weather and
    time-of-day variation of the upper level.
    """

    floor_db: float = -24.0
    max_db: float = 6.0
    noise_sigma: float = 0.0  # dB
    drift_amplitude: float = 0.0  # dB
    drift_period: float = 86400.0  # s
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.max_db <= self.floor_db:
            raise ValueError(
                f"max_db ({self.max_db}) must exceed floor_db ({self.floor_db})"
            )
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        if self.drift_period <= 0:
            raise ValueError("drift_period must be positive")


class BeaconSample(NamedTuple):
    """One timestamped measurement; angles are resolver readbacks."""

    t: float
    azimuth: float
    elevation: float
    level: float


def command(
    state: AntennaState, target_azimuth: float, target_elevation: float
) -> AntennaState:
    """Store a new slew target; true angles move only on tick."""
    lo, hi = state.az_limits
    if not lo <= target_azimuth <= hi:
        raise AxisLimitError(
            f"target azimuth {target_azimuth} outside limits [{lo}, {hi}]"
        )
    lo, hi = state.el_limits
    if not lo <= target_elevation <= hi:
        raise AxisLimitError(
            f"target elevation {target_elevation} outside limits [{lo}, {hi}]"
        )
    return replace(
        state, target_azimuth=target_azimuth, target_elevation=target_elevation
    )


def _approach(current: float, target: float, max_step: float) -> float:
    delta = target - current
    if abs(delta) <= max_step:
        return target
    return current + math.copysign(max_step, delta)


def tick(state: AntennaState, dt: float) -> AntennaState:
    """Advance both axes toward their targets by at most slew_rate*dt.

    Motion on the two axes is independent and simultaneous; an axis
    never overshoots its target.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    az = _approach(state.true_azimuth, state.target_azimuth, state.az_slew_rate * dt)
    el = _approach(state.true_elevation, state.target_elevation, state.el_slew_rate * dt)
    if az == state.true_azimuth and el == state.true_elevation:
        return state
    return replace(state, true_azimuth=az, true_elevation=el)


def quantize_angle(angle: float, step: float) -> float:
    """Round to the nearest multiple of the resolver step."""
    return round(angle / step) * step


def read_resolvers(state: AntennaState) -> tuple[float, float]:
    """Resolver-quantized (azimuth, elevation) readback in degrees."""
    return (
        quantize_angle(state.true_azimuth, state.resolver_step),
        quantize_angle(state.true_elevation, state.resolver_step),
    )


def _counter_noise(rx: ReceiverConfig, t: float) -> float:
    # Counter-keyed draw: reproducible for a given (seed, t) regardless of
    # call order. Millisecond granularity; samples are never closer than
    # the 20 ms base step.
    counter = int(round(t * 1000.0))
    bitgen = np.random.Philox(key=rx.rng_seed, counter=[counter, 0, 0, 0])
    return float(np.random.Generator(bitgen).normal(0.0, rx.noise_sigma))


def measure(
    state: AntennaState,
    params: ParabolaParams,
    rx: ReceiverConfig,
    t: float,
    rng: Optional[np.random.Generator] = None,
) -> BeaconSample:
    """Measure the beacon through the receiver at time t.

    ``params`` must carry the satellite's current direction as its peak.
    The level is evaluated at the true (not readback) pointing, then
    drift and Gaussian noise are added and the floor clamp applied. The
    returned angles are the resolver readbacks.

    Noise is drawn from ``rng`` when given (the simulation loop passes a
    persistent generator seeded from ``rx.rng_seed``); otherwise from a
    counter-keyed generator so standalone calls stay reproducible.
    """
    raw = beacon_level(params, state.true_azimuth, state.true_elevation)
    if rx.drift_amplitude != 0.0:
        raw += rx.drift_amplitude * math.sin(2.0 * math.pi * t / rx.drift_period)
    if rx.noise_sigma > 0.0:
        if rng is not None:
            raw += rng.normal(0.0, rx.noise_sigma)
        else:
            raw += _counter_noise(rx, t)
    level = raw if raw > rx.floor_db else rx.floor_db
    az, el = read_resolvers(state)
    return BeaconSample(t=t, azimuth=az, elevation=el, level=level)


def receiver_voltage(level: float, rx: ReceiverConfig) -> float:
    """Affine dB-to-volts telemetry map, clamped to [0, 10] V."""
    v = 10.0 * (level - rx.floor_db) / (rx.max_db - rx.floor_db)
    return min(10.0, max(0.0, v))
