"""Append-only telemetry log with offline statistics and CSV persistence.

One record per simulation step. The CSV encoding writes floats at full
round-trip precision (padded to at least six decimal places), so a
written log reads back bit-exact and still drops straight into any
plotting tool.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Optional

import numpy as np


class TelemetryRecord(NamedTuple):
    t: float  # s
    commanded_az: float  # deg
    commanded_el: float  # deg
    readback_az: float  # deg
    readback_el: float  # deg
    beacon_db: float
    receiver_volts: float
    phase: str
    cycle_index: int


CSV_HEADER = (
    "t_s,commanded_az_deg,commanded_el_deg,readback_az_deg,readback_el_deg,"
    "beacon_db,receiver_volts,phase,cycle_index"
)


class BeaconStats(NamedTuple):
    mean: float
    stddev: float
    minimum: float
    maximum: float


class TelemetryLog:
    """Ordered record store; appends must carry strictly increasing time."""

    def __init__(self, records: Optional[Iterable[TelemetryRecord]] = None):
        self._records: list[TelemetryRecord] = []
        if records is not None:
            for record in records:
                self.append(record)

    def append(self, record: TelemetryRecord) -> None:
        if self._records and record.t <= self._records[-1].t:
            raise ValueError(
                f"non-monotonic time: {record.t} after {self._records[-1].t}"
            )
        self._records.append(record)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TelemetryRecord]:
        return iter(self._records)

    def __getitem__(self, index):
        return self._records[index]


def beacon_stats(
    log: TelemetryLog, t0: Optional[float] = None, t1: Optional[float] = None
) -> BeaconStats:
    """Population statistics of the beacon level over [t0, t1] (inclusive).

    Omitted bounds default to the whole log. An empty window raises
    ValueError.
    """
    levels = [
        r.beacon_db
        for r in log
        if (t0 is None or r.t >= t0) and (t1 is None or r.t <= t1)
    ]
    if not levels:
        raise ValueError(f"no records in window [{t0}, {t1}]")
    arr = np.asarray(levels)
    return BeaconStats(
        mean=float(arr.mean()),
        stddev=float(arr.std()),  # population: divide by N
        minimum=float(arr.min()),
        maximum=float(arr.max()),
    )


def extract_trajectory(
    log: TelemetryLog, decimation: int = 1
) -> list[tuple[float, float]]:
    """Every decimation-th (readback_az, readback_el) pair, order preserved."""
    if decimation < 1:
        raise ValueError(f"decimation must be >= 1, got {decimation}")
    return [
        (r.readback_az, r.readback_el)
        for r in list(log)[::decimation]
    ]


def format_float(value: float) -> str:
    """Shortest exact decimal form, padded to >= 6 decimal places."""
    s = repr(float(value))
    if "e" not in s and "E" not in s and "." in s:
        decimals = len(s) - s.index(".") - 1
        if decimals < 6:
            s += "0" * (6 - decimals)
    return s


def write_csv(log: TelemetryLog, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in log:
            fh.write(
                ",".join(
                    (
                        format_float(r.t),
                        format_float(r.commanded_az),
                        format_float(r.commanded_el),
                        format_float(r.readback_az),
                        format_float(r.readback_el),
                        format_float(r.beacon_db),
                        format_float(r.receiver_volts),
                        r.phase,
                        str(r.cycle_index),
                    )
                )
                + "\n"
            )


def read_csv(path: str) -> TelemetryLog:
    log = TelemetryLog()
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unrecognized telemetry header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise ValueError(f"malformed telemetry line: {line!r}")
            log.append(
                TelemetryRecord(
                    t=float(parts[0]),
                    commanded_az=float(parts[1]),
                    commanded_el=float(parts[2]),
                    readback_az=float(parts[3]),
                    readback_el=float(parts[4]),
                    beacon_db=float(parts[5]),
                    receiver_volts=float(parts[6]),
                    phase=parts[7],
                    cycle_index=int(parts[8]),
                )
            )
    return log
