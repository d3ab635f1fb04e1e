"""Simulated switch data plane and polling collector.

Switches hold monotone per-port counters driven by traffic profiles and
injected anomalies on a simulated clock; a collector polls them with a
statistics request/reply exchange at a fixed cadence and appends snapshots to
a register store.  Everything is deterministic under a fixed seed, so a
42-minute experiment replays in milliseconds.
"""

from __future__ import annotations

import logging
import zlib
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import (
    DataError,
    InsufficientDataError,
    InputError,
    MonotonicityError,
    UnknownPortError,
)

log = logging.getLogger(__name__)

DEFAULT_INTERVAL = 10.0

# Nominal frame size tying packet counters to byte counters.
FRAME_BYTES = 1000

COUNTER_FIELDS = (
    "rx_packets",
    "tx_packets",
    "rx_bytes",
    "tx_bytes",
    "rx_drops",
    "tx_drops",
    "rx_errors",
    "tx_errors",
)


@dataclass
class PortCounters:
    """Cumulative per-port statistics, all monotone non-decreasing."""

    rx_packets: int = 0
    tx_packets: int = 0
    rx_bytes: int = 0
    tx_bytes: int = 0
    rx_drops: int = 0
    tx_drops: int = 0
    rx_errors: int = 0
    tx_errors: int = 0

    def copy(self) -> "PortCounters":
        return PortCounters(**{f.name: getattr(self, f.name) for f in fields(self)})


@dataclass(frozen=True)
class StatsRequest:
    request_id: int
    switch_id: str
    issued_at: float


@dataclass(frozen=True)
class StatsReply:
    request_id: int
    switch_id: str
    ports: dict
    replied_at: float


@dataclass(frozen=True)
class Burst:
    t_start: float
    duration: float
    multiplier: float

    def __post_init__(self):
        if self.duration <= 0 or self.multiplier <= 0:
            raise DataError(f"burst needs positive duration and multiplier: {self}")


@dataclass(frozen=True)
class TrafficProfile:
    """Traffic intensity of one port: a base rate per direction, optional
    relative jitter on each polling interval's volume, and scheduled bursts."""

    base_rate: float
    jitter: float = 0.0
    bursts: tuple = ()

    def __post_init__(self):
        if self.base_rate <= 0:
            raise DataError(f"base_rate must be positive, got {self.base_rate}")
        if self.jitter < 0:
            raise DataError(f"jitter must be nonnegative, got {self.jitter}")


ANOMALY_KINDS = ("spike", "dropout", "drift")


@dataclass(frozen=True)
class AnomalyScenario:
    """Injected atypical behavior on one port.

    spike multiplies traffic by magnitude (> 1) during [t0, t0+duration);
    dropout scales it by magnitude in [0, 1); drift ramps the multiplier
    linearly from 1 to magnitude over the duration and then holds it.
    """

    kind: str
    port: int
    t0: float
    duration: float
    magnitude: float

    def __post_init__(self):
        if self.kind not in ANOMALY_KINDS:
            raise DataError(f"unknown anomaly kind {self.kind!r}")
        if self.duration <= 0:
            raise DataError(f"anomaly duration must be positive, got {self.duration}")
        if self.kind in ("spike", "drift") and self.magnitude <= 1:
            raise DataError(f"{self.kind} magnitude must exceed 1, got {self.magnitude}")
        if self.kind == "dropout" and not 0.0 <= self.magnitude < 1.0:
            raise DataError(f"dropout magnitude must lie in [0, 1), got {self.magnitude}")

    def factor_at(self, t: float) -> float:
        if self.kind == "drift":
            if t < self.t0:
                return 1.0
            if t >= self.t0 + self.duration:
                return self.magnitude
            return 1.0 + (self.magnitude - 1.0) * (t - self.t0) / self.duration
        if self.t0 <= t < self.t0 + self.duration:
            return self.magnitude
        return 1.0


def _rng_for(seed: int, switch_id: str) -> np.random.Generator:
    # Independent substream per switch so multi-switch runs equal the
    # concatenation of single-switch runs.
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, zlib.crc32(switch_id.encode())]))
    )


class SwitchSim:
    """One simulated switch: per-port counters on a private clock and RNG."""

    def __init__(self, switch_id: str, profiles: dict, scenarios=(), seed: int = 0):
        if not profiles:
            raise InputError(f"switch {switch_id!r} has no ports")
        self.switch_id = switch_id
        self.profiles = dict(profiles)
        self.scenarios = tuple(scenarios)
        for sc in self.scenarios:
            if sc.port not in self.profiles:
                raise UnknownPortError(
                    f"anomaly targets unknown port {sc.port} on switch {switch_id!r}"
                )
        self.seed = seed
        self.clock = 0.0
        self.counters = {port: PortCounters() for port in sorted(self.profiles)}
        self._rng = _rng_for(seed, switch_id)

    def _volume(self, port: int, t0: float, t1: float, apply_dropouts: bool) -> float:
        """Exact bytes offered to a port over [t0, t1), before jitter."""
        profile = self.profiles[port]
        cuts = {t0, t1}
        for b in profile.bursts:
            cuts.update((b.t_start, b.t_start + b.duration))
        scenarios = [s for s in self.scenarios if s.port == port]
        for s in scenarios:
            cuts.update((s.t0, s.t0 + s.duration))
        edges = sorted(t for t in cuts if t0 <= t <= t1)
        drifts = [s for s in scenarios if s.kind == "drift"]

        total = 0.0
        for a, b in zip(edges, edges[1:]):
            if b <= a:
                continue
            # Inside a cut-free span every burst/spike/dropout factor is
            # constant, so sampling them at the midpoint is exact.  Drift
            # ramps vary linearly and are continuous, so Simpson integrates
            # their product exactly for up to two overlapping ramps.
            mid = 0.5 * (a + b)
            const = 1.0
            for burst in profile.bursts:
                if burst.t_start <= mid < burst.t_start + burst.duration:
                    const *= burst.multiplier
            for s in scenarios:
                if s.kind == "drift" or (s.kind == "dropout" and not apply_dropouts):
                    continue
                const *= s.factor_at(mid)

            def ramps(t: float) -> float:
                f = 1.0
                for s in drifts:
                    f *= s.factor_at(t)
                return f

            total += profile.base_rate * const * (b - a) * (
                ramps(a) + 4.0 * ramps(mid) + ramps(b)
            ) / 6.0
        return total

    def advance(self, dt: float) -> None:
        """Accrue dt seconds of traffic on every port.

        Per direction the interval volume is scaled by max(0, 1 + jitter * g)
        with one standard normal g drawn from the switch stream, then rounded
        to whole bytes.  Dropout-suppressed volume lands in the drop counters.
        """
        if dt <= 0:
            raise InputError(f"dt must be positive, got {dt}")
        t0, t1 = self.clock, self.clock + dt
        for port in sorted(self.profiles):
            profile = self.profiles[port]
            offered = self._volume(port, t0, t1, apply_dropouts=True)
            if any(s.kind == "dropout" and s.port == port for s in self.scenarios):
                suppressed = max(
                    0.0, self._volume(port, t0, t1, apply_dropouts=False) - offered
                )
            else:
                suppressed = 0.0
            ctr = self.counters[port]
            for direction in ("rx", "tx"):
                g = self._rng.standard_normal()
                delta = int(round(offered * max(0.0, 1.0 + profile.jitter * g)))
                bytes_field = f"{direction}_bytes"
                new_bytes = getattr(ctr, bytes_field) + delta
                setattr(ctr, bytes_field, new_bytes)
                setattr(ctr, f"{direction}_packets", new_bytes // FRAME_BYTES)
                setattr(
                    ctr,
                    f"{direction}_drops",
                    getattr(ctr, f"{direction}_drops") + int(round(suppressed)),
                )
        self.clock = t1

    def stats_reply(self, request: StatsRequest) -> StatsReply:
        if request.switch_id != self.switch_id:
            raise InputError(
                f"request for {request.switch_id!r} sent to {self.switch_id!r}"
            )
        return StatsReply(
            request_id=request.request_id,
            switch_id=self.switch_id,
            ports={port: ctr.copy() for port, ctr in self.counters.items()},
            replied_at=self.clock,
        )


def advance(switch: SwitchSim, dt: float) -> SwitchSim:
    """Functional spelling of SwitchSim.advance; returns the mutated switch."""
    switch.advance(dt)
    return switch


@dataclass(frozen=True)
class Snapshot:
    tick: int
    timestamp_s: float
    counters: PortCounters


class RegisterStore:
    """Snapshot series per (switch, port), plus any recorded polling gaps."""

    def __init__(self):
        self._series: dict[tuple[str, int], list[Snapshot]] = {}
        self.gaps: list[tuple[str, int]] = []

    def append(self, switch_id: str, port: int, snapshot: Snapshot) -> None:
        rows = self._series.setdefault((switch_id, port), [])
        if rows and snapshot.tick <= rows[-1].tick:
            raise InputError(
                f"tick {snapshot.tick} arrived out of order for {switch_id}:{port}"
            )
        rows.append(snapshot)

    def record_gap(self, switch_id: str, tick: int) -> None:
        self.gaps.append((switch_id, tick))

    def keys(self) -> list[tuple[str, int]]:
        return sorted(self._series)

    def __len__(self) -> int:
        return len(self._series)

    def snapshots(self, switch_id: str, port: int) -> list[Snapshot]:
        try:
            return list(self._series[(switch_id, port)])
        except KeyError:
            raise UnknownPortError(f"no series for {switch_id!r} port {port}") from None

    def counter_series(self, switch_id: str, port: int, field_name: str) -> np.ndarray:
        if field_name not in COUNTER_FIELDS:
            raise UnknownPortError(f"unknown counter field {field_name!r}")
        rows = self.snapshots(switch_id, port)
        return np.array([getattr(s.counters, field_name) for s in rows], dtype=np.int64)

    def timestamps(self, switch_id: str, port: int) -> np.ndarray:
        return np.array(
            [s.timestamp_s for s in self.snapshots(switch_id, port)], dtype=np.float64
        )


class Collector:
    """Issues uniquely numbered statistics requests and files the replies."""

    def __init__(self):
        self._next_id = 1
        self._outstanding: dict[int, str] = {}

    def request(self, switch_id: str, now: float) -> StatsRequest:
        req = StatsRequest(request_id=self._next_id, switch_id=switch_id, issued_at=now)
        self._next_id += 1
        self._outstanding[req.request_id] = switch_id
        return req

    def ingest(self, reply: StatsReply, store: RegisterStore, tick: int) -> bool:
        expected = self._outstanding.pop(reply.request_id, None)
        if expected is None or expected != reply.switch_id:
            log.warning(
                "dropping reply with unknown request id %s from %s",
                reply.request_id,
                reply.switch_id,
            )
            return False
        for port, counters in sorted(reply.ports.items()):
            store.append(
                reply.switch_id,
                port,
                Snapshot(tick=tick, timestamp_s=reply.replied_at, counters=counters),
            )
        return True

    def expire(self, switch_id: str, tick: int, store: RegisterStore) -> None:
        store.record_gap(switch_id, tick)
        self._outstanding = {
            rid: sw for rid, sw in self._outstanding.items() if sw != switch_id
        }


def poll(
    collector: Collector,
    switches,
    interval: float = DEFAULT_INTERVAL,
    duration: float = 0.0,
    store: RegisterStore | None = None,
    lose_reply=None,
) -> RegisterStore:
    """Drive every switch through duration seconds of polled simulation.

    Each tick advances all switches by one interval, then requests and files
    one snapshot per switch.  lose_reply, if given, is called with
    (switch_id, tick) and may return True to drop that reply, which records a
    gap instead of a snapshot.

    Args:
        interval: polling cadence in simulated seconds.
        duration: total simulated time; must be a whole number of intervals.

    Returns:
        The filled RegisterStore; duration 0 yields an empty one.
    """
    if interval <= 0:
        raise InputError(f"interval must be positive, got {interval}")
    if duration < 0:
        raise InputError(f"duration must be nonnegative, got {duration}")
    n_ticks = round(duration / interval)
    if abs(n_ticks * interval - duration) > 1e-9 * max(1.0, interval):
        raise InputError(
            f"duration {duration} is not a multiple of the interval {interval}"
        )
    if store is None:
        store = RegisterStore()
    for tick in range(1, n_ticks + 1):
        for sw in switches:
            sw.advance(interval)
        # Barrier per tick: every reply is filed before the next tick starts.
        for sw in switches:
            req = collector.request(sw.switch_id, now=sw.clock)
            if lose_reply is not None and lose_reply(sw.switch_id, tick):
                collector.expire(sw.switch_id, tick, store)
                continue
            collector.ingest(sw.stats_reply(req), store, tick=tick)
    return store


def deltas(snapshots) -> np.ndarray:
    """Per-interval differences of a cumulative counter series.

    Raises:
        InsufficientDataError: fewer than 2 snapshots.
        MonotonicityError: any decreasing step (counter wrap is out of scope
            and treated as a contract violation).
    """
    values = np.asarray(snapshots, dtype=np.int64)
    if values.ndim != 1 or values.shape[0] < 2:
        raise InsufficientDataError(
            f"need at least 2 snapshots to difference, got {values.shape}"
        )
    diff = np.diff(values)
    if np.any(diff < 0):
        where = int(np.flatnonzero(diff < 0)[0])
        raise MonotonicityError(
            f"counter decreases at snapshot {where + 1}: "
            f"{values[where]} -> {values[where + 1]}"
        )
    return diff


def select_server_ports(store: RegisterStore, server_port_ids) -> RegisterStore:
    """Restrict a store to the named (switch_id, port) keys."""
    wanted = [(str(sw), int(port)) for sw, port in server_port_ids]
    known = set(store.keys())
    for key in wanted:
        if key not in known:
            raise UnknownPortError(f"no series for {key[0]!r} port {key[1]}")
    out = RegisterStore()
    for key in store.keys():
        if key in wanted:
            for snap in store.snapshots(*key):
                out.append(key[0], key[1], snap)
    out.gaps = [g for g in store.gaps if any(g[0] == sw for sw, _ in wanted)]
    return out
