"""Trace files, deterministic replay, and run statistics.

A trace is UTF-8 JSON-lines: {"t_ms": int, "port": "A"|"B", "type":
"note_on"|"note_off"|"cc"|"raw", ...} with type-specific fields (channel/
note/velocity, controller/value, or bytes).  Replay drives the engine over
virtual time -- the union of event timestamps and the ramp tick grid -- so a
(trace, config, seed) triple always produces byte-identical outputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from qduet.engine import PORTS, Engine, EngineConfig, SimRecord
from qduet.midi import (ControlChange, MidiEvent, MidiParser, NoteOff, NoteOn,
                        Other, normalize_note_off, serialize)


class TraceError(ValueError):
    """Malformed trace file; message carries the offending line number."""


@dataclass(frozen=True)
class TraceEvent:
    """One timestamped, port-tagged record; raw is the unframed-bytes escape hatch."""

    t_ms: int
    port: str
    event: MidiEvent | None = None
    raw: bytes | None = None


@dataclass
class StatsReport:
    """Aggregate view of a replay's simulations.

    correlation_estimate is 2*agreement_rate - 1: it converges on cos(pi*s)
    when s is held fixed, which is the empirical check that the circuit does
    what the algebra says.
    """

    sim_count: int
    shot_count: int
    sims: list[SimRecord]
    agreement_rate: float | None
    correlation_estimate: float | None
    s_histogram: dict[str, int]

    @classmethod
    def from_sims(cls, sims: list[SimRecord]) -> "StatsReport":
        shot_count = sum(len(r.shots) for r in sims)
        agree = sum(1 for r in sims for b0, b1 in r.shots if b0 == b1)
        rate = agree / shot_count if shot_count else None
        histogram: dict[str, int] = {}
        for r in sims:
            label = _s_label(r.s)
            histogram[label] = histogram.get(label, 0) + 1
        return cls(
            sim_count=len(sims),
            shot_count=shot_count,
            sims=sims,
            agreement_rate=rate,
            correlation_estimate=None if rate is None else 2.0 * rate - 1.0,
            s_histogram=histogram,
        )

    def to_dict(self) -> dict:
        return {
            "sim_count": self.sim_count,
            "shot_count": self.shot_count,
            "agreement_rate": self.agreement_rate,
            "correlation_estimate": self.correlation_estimate,
            "s_histogram": self.s_histogram,
            "sims": [
                {
                    "t_ms": r.t_ms,
                    "s": r.s,
                    "shots": [[b0, b1] for b0, b1 in r.shots],
                    "value_a": r.value_a,
                    "value_b": r.value_b,
                }
                for r in self.sims
            ],
        }


def _s_label(s: float) -> str:
    twelfths = round(s * 12)
    if abs(s * 12 - twelfths) < 1e-9:
        return f"{twelfths}/12"
    return repr(s)


def _parse_line(obj: dict, lineno: int) -> TraceEvent:
    def fail(msg: str) -> TraceError:
        return TraceError(f"line {lineno}: {msg}")

    t_ms = obj.get("t_ms")
    if not isinstance(t_ms, int) or isinstance(t_ms, bool) or t_ms < 0:
        raise fail(f"t_ms must be a non-negative integer, got {t_ms!r}")
    port = obj.get("port")
    if port not in PORTS:
        raise fail(f"port must be 'A' or 'B', got {port!r}")
    kind = obj.get("type")

    def byte_field(name: str, lo: int = 0, hi: int = 127) -> int:
        v = obj.get(name)
        if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
            raise fail(f"{name} must be an integer in [{lo}, {hi}], got {v!r}")
        return v

    if kind == "note_on":
        return TraceEvent(t_ms, port, NoteOn(byte_field("channel", hi=15),
                                             byte_field("note"), byte_field("velocity")))
    if kind == "note_off":
        return TraceEvent(t_ms, port, NoteOff(byte_field("channel", hi=15),
                                              byte_field("note"), byte_field("velocity")))
    if kind == "cc":
        return TraceEvent(t_ms, port, ControlChange(byte_field("channel", hi=15),
                                                    byte_field("controller"), byte_field("value")))
    if kind == "raw":
        data = obj.get("bytes")
        if (not isinstance(data, list)
                or any(not isinstance(b, int) or isinstance(b, bool) or not 0 <= b <= 255
                       for b in data)):
            raise fail(f"bytes must be a list of integers in [0, 255], got {data!r}")
        return TraceEvent(t_ms, port, raw=bytes(data))
    raise fail(f"unknown record type {kind!r}")


def load_trace(path: str) -> list[TraceEvent]:
    """Parse and validate a trace file; raises TraceError naming the bad line."""
    events: list[TraceEvent] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                raise TraceError(f"line {lineno}: blank line")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TraceError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise TraceError(f"line {lineno}: expected a JSON object")
            record = _parse_line(obj, lineno)
            if events and record.t_ms < events[-1].t_ms:
                raise TraceError(
                    f"line {lineno}: timestamps out of order "
                    f"({record.t_ms} after {events[-1].t_ms})")
            events.append(record)
    return events


def _event_record(t_ms: int, port: str, event: MidiEvent) -> dict:
    if isinstance(event, NoteOn):
        return {"t_ms": t_ms, "port": port, "type": "note_on",
                "channel": event.channel, "note": event.note, "velocity": event.velocity}
    if isinstance(event, NoteOff):
        return {"t_ms": t_ms, "port": port, "type": "note_off",
                "channel": event.channel, "note": event.note, "velocity": event.velocity}
    if isinstance(event, ControlChange):
        return {"t_ms": t_ms, "port": port, "type": "cc",
                "channel": event.channel, "controller": event.controller, "value": event.value}
    if isinstance(event, Other):
        return {"t_ms": t_ms, "port": port, "type": "raw", "bytes": list(serialize(event))}
    raise TypeError(f"not a MIDI event: {event!r}")


def run_replay(trace: list[TraceEvent], config: EngineConfig) -> tuple[list[TraceEvent], StatsReport]:
    """Feed a trace through a fresh engine over virtual time.

    Events are delivered at their own timestamps (relay frames carry the
    input time, never a later tick); the engine steps on every ramp-grid
    tick, and the run continues past the last event until all ramps land and
    no simulation is pending.
    """
    engine = Engine(config)
    parsers = {p: MidiParser() for p in PORTS}
    outputs: list[TraceEvent] = []
    sims: list[SimRecord] = []
    tick = config.ramp_tick_ms

    def collect(frame) -> None:
        for port, ev in frame.events:
            outputs.append(TraceEvent(frame.t_ms, port, ev))

    def feed(record: TraceEvent) -> None:
        decoded = parsers[record.port].feed(record.raw) if record.raw is not None \
            else [record.event]
        for ev in decoded:
            collect(engine.on_midi_in(record.port, normalize_note_off(ev), record.t_ms))

    idx = 0
    next_tick = 0
    while idx < len(trace) or not engine.quiescent():
        if idx < len(trace) and trace[idx].t_ms < next_tick:
            feed(trace[idx])
            idx += 1
            continue
        while idx < len(trace) and trace[idx].t_ms == next_tick:
            feed(trace[idx])
            idx += 1
        before = engine.sim_count
        collect(engine.step(next_tick))
        if engine.sim_count != before:
            sims.append(engine.last_sim)
        next_tick += tick
    return outputs, StatsReport.from_sims(sims)


def write_trace(outputs: list[TraceEvent], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in outputs:
            fh.write(json.dumps(_event_record(rec.t_ms, rec.port, rec.event)))
            fh.write("\n")


def write_stats(stats: StatsReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(stats.to_dict(), indent=2))
        fh.write("\n")


def write_outputs(outputs: list[TraceEvent], stats: StatsReport,
                  trace_path: str, stats_path: str) -> None:
    """Write the output trace and the stats report; both are byte-stable."""
    write_trace(outputs, trace_path)
    write_stats(stats, stats_path)
