"""Timed step-track cycle: acquire, estimate, move, wait.

Each cycle walks a small rectangle around the current pointing while
recording beacon samples, fits the peak from them, slews to the fitted
peak, and then holds still until the next cycle is due. Holding between
cycles limits mechanical wear; the beacon level decays while the
satellite drifts and is restored by the next cycle, which produces the
characteristic sawtooth level trace.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .antenna import (
    AntennaState,
    BeaconSample,
    ReceiverConfig,
    command,
    measure,
    receiver_voltage,
    tick,
)
from .beacon import (
    DEFAULT_K_EL,
    ParabolaParams,
    QuadraticCoefficients,
    az_coeff_from_elevation,
)
from .estimators import (
    DEFAULT_COEFF_FLOOR,
    DEFAULT_RLS_DELTA,
    EstimationError,
    InsufficientDataError,
    PeakEstimate,
    RlsState,
    ls_fit,
    recover_peak,
    regression_row,
    rls_init,
    rls_recover,
    rls_update,
)
from .orbit import OrbitConfig, satellite_direction
from .telemetry import TelemetryLog, TelemetryRecord

logger = logging.getLogger(__name__)

SAMPLING_MODES = ("continuous", "corner-only")
ESTIMATORS = ("batch-ls", "rls")


class PatternInfeasibleError(Exception):
    """A displacement-pattern corner falls outside the axis limits."""


class TrackerPhase(str, enum.Enum):
    ACQUIRE = "acquire"
    ESTIMATE = "estimate"
    MOVE = "move"
    WAIT = "wait"


@dataclass(frozen=True)
class TrackerConfig:
    """Cycle timing, rectangle geometry, sampling and estimator choice.

    ``sampling_mode`` is either "continuous" (a sample every tick while
    the pattern runs, the 20 ms regime) or "corner-only" (samples only
    while dwelling ``dwell_time`` at each corner, the classic scheme;
    dwell 0 takes exactly one sample per corner). ``k_el`` is the
    a-priori elevation curvature; the azimuth curvature is re-derived
    from the pattern-center elevation at each cycle start.
    """

    rect_half_width_az: float = 0.2  # deg
    rect_half_width_el: float = 0.05  # deg
    dwell_time: float = 1.0  # s
    sample_interval: float = 0.02  # s
    cycle_period: float = 600.0  # s
    sampling_mode: str = "continuous"
    estimator: str = "rls"
    forgetting: float = 0.98
    rls_delta: float = DEFAULT_RLS_DELTA
    k_el: float = DEFAULT_K_EL
    coeff_floor: float = DEFAULT_COEFF_FLOOR
    carry_rls_state: bool = True

    def __post_init__(self) -> None:
        if self.rect_half_width_az <= 0 or self.rect_half_width_el <= 0:
            raise ValueError("rectangle half-widths must be positive")
        if self.dwell_time < 0:
            raise ValueError("dwell_time must be non-negative")
        if self.sample_interval <= 0:
            raise ValueError("sample_interval must be positive")
        if self.cycle_period <= 0:
            raise ValueError("cycle_period must be positive")
        if self.sampling_mode not in SAMPLING_MODES:
            raise ValueError(
                f"sampling_mode must be one of {SAMPLING_MODES}, "
                f"got {self.sampling_mode!r}"
            )
        if self.estimator not in ESTIMATORS:
            raise ValueError(
                f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}"
            )
        if not 0.0 < self.forgetting <= 1.0:
            raise ValueError(f"forgetting must be in (0, 1], got {self.forgetting}")
        if self.rls_delta <= 0:
            raise ValueError("rls_delta must be positive")
        if self.k_el >= 0:
            raise ValueError("k_el must be strictly negative")
        if self.coeff_floor <= 0:
            raise ValueError("coeff_floor must be positive")


def plan_pattern(
    center: tuple[float, float],
    config: TrackerConfig,
    az_limits: tuple[float, float] | None = None,
    el_limits: tuple[float, float] | None = None,
    position: tuple[float, float] | None = None,
) -> list[tuple[float, float]]:
    """Closed rectangular circuit around the center: 4 corners plus return.

    Corners sit at center +/- the configured half-widths and are visited
    counter-clockwise starting from the corner nearest ``position``
    (the center itself when not given; the tie then breaks to the
    lower-left corner), ending back at the start corner.

    Raises PatternInfeasibleError when limits are supplied and a corner
    falls outside them.
    """
    caz, cel = center
    w = config.rect_half_width_az
    h = config.rect_half_width_el
    corners = [
        (caz - w, cel - h),
        (caz + w, cel - h),
        (caz + w, cel + h),
        (caz - w, cel + h),
    ]
    for az, el in corners:
        if az_limits is not None and not az_limits[0] <= az <= az_limits[1]:
            raise PatternInfeasibleError(
                f"corner azimuth {az} outside limits {az_limits}"
            )
        if el_limits is not None and not el_limits[0] <= el <= el_limits[1]:
            raise PatternInfeasibleError(
                f"corner elevation {el} outside limits {el_limits}"
            )
    ref = center if position is None else position
    start = min(
        range(4),
        key=lambda i: (corners[i][0] - ref[0]) ** 2 + (corners[i][1] - ref[1]) ** 2,
    )
    circuit = [corners[(start + i) % 4] for i in range(4)]
    circuit.append(corners[start])
    return circuit


class StepTracker:
    """Drives the four-phase tracking cycle, one call per sample tick.

    ``step`` consumes the latest beacon sample and plant state and may
    return an (azimuth, elevation) command for the plant. Phase order is
    always acquire -> estimate -> move -> wait; a failed cycle (pattern
    infeasible, too few samples, degenerate or rank-deficient fit) logs
    the reason, re-commands the pattern center and falls through to
    wait.

    The fit runs in pattern-center-relative coordinates: regressors like
    [180.2, 72.05, 1] over a +/-0.2 deg pattern make the recursion's gain
    matrix collapse along a near-degenerate direction, while offsets from
    the center keep it well conditioned. The recovered peak is shifted
    back to absolute angles, and a carried RLS solution is re-encoded
    into each new cycle's frame.
    """

    def __init__(self, config: TrackerConfig):
        self.config = config
        self.phase = TrackerPhase.WAIT
        self.cycle_index = -1
        self.pattern_center: tuple[float, float] | None = None
        self.last_estimate: PeakEstimate | None = None
        self.next_cycle_time: float | None = None
        self._waypoints: list[tuple[float, float]] = []
        self._waypoint_idx = 0
        self._dwell_until: float | None = None
        self._move_target: tuple[float, float] | None = None
        self._rows: list = []
        self._rls: RlsState | None = None
        self._k: QuadraticCoefficients | None = None
        self._collected = 0

    def step(
        self, plant: AntennaState, sample: BeaconSample, now: float
    ) -> tuple[float, float] | None:
        if self.next_cycle_time is None:
            self.next_cycle_time = now
        if self.phase is TrackerPhase.WAIT:
            if now >= self.next_cycle_time:
                return self._begin_cycle(plant, sample, now)
            return None
        if self.phase is TrackerPhase.ACQUIRE:
            return self._acquire(plant, sample, now)
        if self.phase is TrackerPhase.ESTIMATE:
            return self._estimate(plant)
        return self._move(plant, sample)

    # -- phase handlers -------------------------------------------------

    def _begin_cycle(
        self, plant: AntennaState, sample: BeaconSample, now: float
    ) -> tuple[float, float] | None:
        self.cycle_index += 1
        self.next_cycle_time = now + self.config.cycle_period
        self.pattern_center = (sample.azimuth, sample.elevation)
        k_az = az_coeff_from_elevation(self.config.k_el, self.pattern_center[1])
        if abs(k_az) < self.config.coeff_floor:
            logger.warning(
                "cycle %d skipped: azimuth curvature %.3g below floor %.3g",
                self.cycle_index,
                k_az,
                self.config.coeff_floor,
            )
            self.phase = TrackerPhase.WAIT
            return None
        self._k = QuadraticCoefficients(k_az=k_az, k_el=self.config.k_el)
        try:
            self._waypoints = plan_pattern(
                self.pattern_center,
                self.config,
                az_limits=plant.az_limits,
                el_limits=plant.el_limits,
            )
        except PatternInfeasibleError as exc:
            logger.warning("cycle %d skipped: %s", self.cycle_index, exc)
            self.phase = TrackerPhase.WAIT
            return None
        self._waypoint_idx = 0
        self._dwell_until = None
        self._collected = 0
        if self.config.estimator == "rls":
            self._rls = rls_init(self.config.forgetting, self.config.rls_delta)
            if self.config.carry_rls_state and self.last_estimate is not None:
                self._rls = RlsState(
                    coeffs=self._encode_local(self.last_estimate),
                    cov=self._rls.cov,
                    forgetting=self._rls.forgetting,
                )
        else:
            self._rows = []
        self.phase = TrackerPhase.ACQUIRE
        if self.config.sampling_mode == "continuous":
            self._collect(sample)
        return self._waypoints[0]

    def _acquire(
        self, plant: AntennaState, sample: BeaconSample, now: float
    ) -> tuple[float, float] | None:
        if self.config.sampling_mode == "continuous":
            self._collect(sample)
        waypoint = self._waypoints[self._waypoint_idx]
        if not self._arrived(plant, sample, waypoint):
            return None
        at_corner = self._waypoint_idx < 4
        if self.config.sampling_mode == "corner-only" and at_corner:
            if self._dwell_until is None:
                self._dwell_until = now + self.config.dwell_time
                self._collect(sample)
            else:
                self._collect(sample)
            if now < self._dwell_until:
                return None
        self._dwell_until = None
        self._waypoint_idx += 1
        if self._waypoint_idx < len(self._waypoints):
            return self._waypoints[self._waypoint_idx]
        self.phase = TrackerPhase.ESTIMATE
        return None

    def _estimate(self, plant: AntennaState) -> tuple[float, float] | None:
        try:
            if self._collected < 3:
                raise InsufficientDataError(
                    f"collected {self._collected} samples, need at least 3"
                )
            if self.config.estimator == "rls":
                local = rls_recover(self._rls, self._k, self.config.coeff_floor)
            else:
                beta = ls_fit(self._rows)
                local = recover_peak(beta, self._k, self.config.coeff_floor)
        except EstimationError as exc:
            logger.warning("cycle %d aborted: %s", self.cycle_index, exc)
            self.phase = TrackerPhase.WAIT
            return self._clamp_to_limits(self.pattern_center, plant)
        caz, cel = self.pattern_center
        estimate = PeakEstimate(
            azimuth=local.azimuth + caz,
            elevation=local.elevation + cel,
            level=local.level,
        )
        self.last_estimate = estimate
        self._move_target = self._clamp_to_limits(
            (estimate.azimuth, estimate.elevation), plant
        )
        self.phase = TrackerPhase.MOVE
        return self._move_target

    def _move(self, plant: AntennaState, sample: BeaconSample) -> None:
        if self._arrived(plant, sample, self._move_target):
            self.phase = TrackerPhase.WAIT
        return None

    # -- helpers --------------------------------------------------------

    @staticmethod
    def _clamp_to_limits(
        target: tuple[float, float], plant: AntennaState
    ) -> tuple[float, float]:
        return (
            min(max(target[0], plant.az_limits[0]), plant.az_limits[1]),
            min(max(target[1], plant.el_limits[0]), plant.el_limits[1]),
        )

    def _arrived(
        self,
        plant: AntennaState,
        sample: BeaconSample,
        target: tuple[float, float],
    ) -> bool:
        tol = plant.resolver_step
        return (
            abs(sample.azimuth - target[0]) <= tol
            and abs(sample.elevation - target[1]) <= tol
        )

    def _collect(self, sample: BeaconSample) -> None:
        caz, cel = self.pattern_center
        local = BeaconSample(
            t=sample.t,
            azimuth=sample.azimuth - caz,
            elevation=sample.elevation - cel,
            level=sample.level,
        )
        row = regression_row(local, self._k)
        if self.config.estimator == "rls":
            self._rls, _ = rls_update(self._rls, row)
        else:
            self._rows.append(row)
        self._collected += 1

    def _encode_local(self, estimate: PeakEstimate) -> np.ndarray:
        # Previous absolute peak expressed as regression coefficients in
        # the current pattern-center frame, with the current curvature.
        caz, cel = self.pattern_center
        daz = estimate.azimuth - caz
        del_ = estimate.elevation - cel
        k_az, k_el = self._k.k_az, self._k.k_el
        return np.array(
            [
                -2.0 * k_az * daz,
                -2.0 * k_el * del_,
                estimate.level + k_az * daz * daz + k_el * del_ * del_,
            ]
        )


def pattern_duration(config: TrackerConfig, plant: AntennaState) -> float:
    """Worst-case time to run the displacement pattern, in seconds.

    Approach to the first corner, the four circuit legs, plus corner
    dwells in corner-only mode.
    """
    w = config.rect_half_width_az
    h = config.rect_half_width_el
    approach = max(w / plant.az_slew_rate, h / plant.el_slew_rate)
    perimeter = 2.0 * (2.0 * w / plant.az_slew_rate) + 2.0 * (
        2.0 * h / plant.el_slew_rate
    )
    dwells = 4.0 * config.dwell_time if config.sampling_mode == "corner-only" else 0.0
    return approach + perimeter + dwells


def run_scenario(
    orbit: OrbitConfig,
    plant: AntennaState,
    rx: ReceiverConfig,
    config: TrackerConfig,
    duration: float,
    peak_level_db: float | None = None,
) -> TelemetryLog:
    """Run the closed loop for ``duration`` seconds of simulated time.

    The clock advances in ``config.sample_interval`` steps; every step
    measures the beacon, feeds the tracker, applies any resulting plant
    command and integrates the plant motion, emitting one telemetry
    record. The true beacon surface peaks at the satellite direction
    with level ``peak_level_db`` (the receiver's max_db when omitted)
    and an azimuth curvature re-derived from the satellite elevation.

    Deterministic for a fixed receiver seed. Raises ValueError before
    starting if the cycle period cannot contain the pattern, and
    PatternInfeasibleError if the initial pattern violates axis limits.
    """
    if duration < 0:
        raise ValueError(f"duration must be non-negative, got {duration}")
    min_cycle = pattern_duration(config, plant)
    if config.cycle_period <= min_cycle:
        raise ValueError(
            f"cycle_period {config.cycle_period}s cannot contain the "
            f"displacement pattern ({min_cycle:.1f}s)"
        )
    plan_pattern(
        (plant.true_azimuth, plant.true_elevation),
        config,
        az_limits=plant.az_limits,
        el_limits=plant.el_limits,
    )
    peak = rx.max_db if peak_level_db is None else peak_level_db
    k_el = config.k_el
    tracker = StepTracker(config)
    log = TelemetryLog()
    rng = np.random.default_rng(rx.rng_seed)
    dt = config.sample_interval
    n_steps = round(duration / dt)
    for i in range(n_steps):
        t = i * dt
        sat_az, sat_el = satellite_direction(orbit, t)
        field = ParabolaParams(
            k_az=az_coeff_from_elevation(k_el, sat_el),
            k_el=k_el,
            peak_az=sat_az,
            peak_el=sat_el,
            peak_level=peak,
        )
        sample = measure(plant, field, rx, t, rng=rng)
        cmd = tracker.step(plant, sample, t)
        if cmd is not None:
            plant = command(plant, cmd[0], cmd[1])
        log.append(
            TelemetryRecord(
                t=t,
                commanded_az=plant.target_azimuth,
                commanded_el=plant.target_elevation,
                readback_az=sample.azimuth,
                readback_el=sample.elevation,
                beacon_db=sample.level,
                receiver_volts=receiver_voltage(sample.level, rx),
                phase=tracker.phase.value,
                cycle_index=tracker.cycle_index,
            )
        )
        plant = tick(plant, dt)
    return log
