"""Deterministic real-time core: note relay, simulation cadence, CC ramps.

The engine is single-threaded and clocked from outside: callers feed input
events through on_midi_in() at their timestamps and call step() on the ramp
tick grid.  Note relay happens in the same frame as the input (the hardware
this models forwards notes with sub-millisecond latency); the quantum shots
run asynchronously from relay, at most once per sim period and only after a
new note.  Everything is a pure function of (config, seed, inputs), which is
what makes golden-trace replay possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from qduet import qcore, tonal
from qduet.midi import ControlChange, MidiEvent, NoteOn

PORTS = ("A", "B")


class ClockRegression(ValueError):
    """step() was called with a timestamp earlier than a previous call."""


@dataclass
class EngineConfig:
    """All timing and mapping knobs; defaults match the reference rig."""

    window_size: int = 8
    shots_per_sim: int = 7
    sim_period_ms: int = 100
    ramp_tick_ms: int = 10
    ramp_step: int = 7  # ceil(5% of 127) CC units per tick
    cc_controller_a: int = 54
    cc_controller_b: int = 80
    cc_channel_a: int = 0
    cc_channel_b: int = 0
    relay: dict[str, str] = field(default_factory=lambda: {"A": "A", "B": "B"})
    seed: int = 42

    def validate(self) -> None:
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")
        if not 1 <= self.shots_per_sim <= 7:
            raise ValueError("shots_per_sim must be in [1, 7] to fit a 7-bit CC value")
        if self.ramp_tick_ms < 1 or self.sim_period_ms < self.ramp_tick_ms:
            raise ValueError("need sim_period_ms >= ramp_tick_ms >= 1")
        if self.ramp_step < 1:
            raise ValueError("ramp_step must be >= 1")
        for name in ("cc_controller_a", "cc_controller_b"):
            if not 0 <= getattr(self, name) <= 127:
                raise ValueError(f"{name} out of range")
        for name in ("cc_channel_a", "cc_channel_b"):
            if not 0 <= getattr(self, name) <= 15:
                raise ValueError(f"{name} out of range")
        if sorted(self.relay) != ["A", "B"] or not set(self.relay.values()) <= {"A", "B"}:
            raise ValueError(f"relay must map ports A and B to ports A/B: {self.relay}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class OutputFrame:
    """Events emitted for one timestamp, in emission order."""

    t_ms: int
    events: tuple[tuple[str, MidiEvent], ...]


@dataclass(frozen=True)
class SimRecord:
    """One simulation: parameter, shots drawn, and the packed CC targets."""

    t_ms: int
    s: float
    shots: tuple[qcore.BitPair, ...]
    value_a: int
    value_b: int


def assemble_cc(shots: list[qcore.BitPair] | tuple[qcore.BitPair, ...]) -> tuple[int, int]:
    """Pack per-qubit shot bits, MSB first, into two 7-bit CC values.

    The top-qubit bits form instrument A's value, the bottom-qubit bits
    instrument B's.  With fewer than 7 shots the low bits stay 0.  At s=0
    the values are equal; at s=1 and 7 shots they are 7-bit complements.
    """
    if not 1 <= len(shots) <= 7:
        raise ValueError(f"need 1..7 shots, got {len(shots)}")
    value_a = 0
    value_b = 0
    for i, (b0, b1) in enumerate(shots):
        value_a |= b0 << (6 - i)
        value_b |= b1 << (6 - i)
    return value_a, value_b


class Engine:
    """Event-driven core owning both note windows, the rng, and the ramps."""

    def __init__(self, config: EngineConfig):
        config.validate()
        self.config = config
        self.windows = {p: tonal.NoteWindow(config.window_size) for p in PORTS}
        self.current_cc = {"A": 0, "B": 0}
        self.target_cc = {"A": 0, "B": 0}
        self.last_sim_ms: int | None = None
        self.note_since_last_sim = False
        self.rng = qcore.SplitMix64(config.seed)
        self.last_s = 0.0
        self.last_shots: tuple[qcore.BitPair, ...] = ()
        self.last_sim: SimRecord | None = None
        self.sim_count = 0
        self._last_step_ms: int | None = None

    def on_midi_in(self, port: str, event: MidiEvent, now: int) -> OutputFrame:
        """Relay an (already normalized) input event; NoteOn also feeds the window."""
        if port not in PORTS:
            raise ValueError(f"unknown input port: {port!r}")
        if isinstance(event, NoteOn):
            self.windows[port].push(event.note)
            self.note_since_last_sim = True
        return OutputFrame(now, ((self.config.relay[port], event),))

    def maybe_simulate(self, now: int) -> OutputFrame:
        """Run one simulation if a note arrived and the sim period elapsed.

        Sets the CC targets; the ramp emits the actual messages.  Returns an
        empty frame either way (simulation output is asynchronous to relay).
        """
        due = self.last_sim_ms is None or now - self.last_sim_ms >= self.config.sim_period_ms
        if self.note_since_last_sim and due:
            self._simulate(tonal.current_parameter(self.windows["A"], self.windows["B"]), now)
        return OutputFrame(now, ())

    def _simulate(self, s: float, now: int) -> SimRecord:
        shots = tuple(qcore.run_shots(s, self.config.shots_per_sim, self.rng))
        value_a, value_b = assemble_cc(shots)
        self.target_cc["A"] = value_a
        self.target_cc["B"] = value_b
        self.last_sim_ms = now
        self.note_since_last_sim = False
        self.last_s = s
        self.last_shots = shots
        self.last_sim = SimRecord(now, s, shots, value_a, value_b)
        self.sim_count += 1
        return self.last_sim

    def ramp_tick(self, now: int) -> OutputFrame:
        """Move each instrument one step toward its target, emitting CC on change."""
        events = []
        for port, controller, channel in (
            ("A", self.config.cc_controller_a, self.config.cc_channel_a),
            ("B", self.config.cc_controller_b, self.config.cc_channel_b),
        ):
            gap = self.target_cc[port] - self.current_cc[port]
            if gap == 0:
                continue
            step = min(self.config.ramp_step, abs(gap))
            self.current_cc[port] += step if gap > 0 else -step
            events.append((port, ControlChange(channel, controller, self.current_cc[port])))
        return OutputFrame(now, tuple(events))

    def step(self, now: int) -> OutputFrame:
        """One tick on the ramp grid: simulate if due, then ramp."""
        if self._last_step_ms is not None and now < self._last_step_ms:
            raise ClockRegression(f"clock went backwards: {now} < {self._last_step_ms}")
        self._last_step_ms = now
        sim_frame = self.maybe_simulate(now)
        ramp_frame = self.ramp_tick(now)
        return OutputFrame(now, sim_frame.events + ramp_frame.events)

    def quiescent(self) -> bool:
        """True when no simulation is pending and all ramps have landed."""
        return not self.note_since_last_sim and self.current_cc == self.target_cc
