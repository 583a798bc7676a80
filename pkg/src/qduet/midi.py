"""Incremental MIDI 1.0 byte-stream parser and serializer.

Covers channel voice messages with running status, real-time bytes (which may
interleave anywhere, even mid-message), and SysEx (consumed whole so it can
never desynchronize the stream).  Output serialization always emits the full
status byte: some hardware chokes on running status at speed, and explicit
bytes keep golden traces unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

# data byte count per channel-status high nibble
_CHANNEL_DATA_LEN = {0x80: 2, 0x90: 2, 0xA0: 2, 0xB0: 2, 0xC0: 1, 0xD0: 1, 0xE0: 2}
# system common (0xF1-0xF7); SysEx start 0xF0 is handled separately
_SYSTEM_DATA_LEN = {0xF1: 1, 0xF2: 2, 0xF3: 1, 0xF4: 0, 0xF5: 0, 0xF6: 0, 0xF7: 0}

SYSEX_START = 0xF0
SYSEX_END = 0xF7


@dataclass(frozen=True)
class NoteOn:
    channel: int
    note: int
    velocity: int


@dataclass(frozen=True)
class NoteOff:
    channel: int
    note: int
    velocity: int


@dataclass(frozen=True)
class ControlChange:
    channel: int
    controller: int
    value: int


@dataclass(frozen=True)
class Other:
    """Any message the engine does not interpret: passed through verbatim."""

    status: int
    data: bytes


MidiEvent = NoteOn | NoteOff | ControlChange | Other


def _check_7bit(name: str, value: int) -> int:
    if not 0 <= value <= 127:
        raise ValueError(f"{name} out of 7-bit range: {value}")
    return value


def _check_channel(channel: int) -> int:
    if not 0 <= channel <= 15:
        raise ValueError(f"channel out of range: {channel}")
    return channel


class MidiParser:
    """Stateful decoder for one input stream; keep one instance per port.

    feed() accepts arbitrary byte garbage and never raises: stray data bytes
    with no running status are skipped and counted in stray_bytes.
    """

    def __init__(self) -> None:
        self._status: int | None = None  # message currently collecting data
        self._need = 0
        self._pending = bytearray()
        self._running: int | None = None  # last channel status, for running status
        self._sysex: bytearray | None = None
        self.stray_bytes = 0

    def feed(self, data: bytes) -> list[MidiEvent]:
        """Consume bytes, returning every message completed by them."""
        events: list[MidiEvent] = []
        for b in data:
            if b >= 0xF8:
                # real-time: passes through even mid-message, disturbs nothing
                events.append(Other(b, b""))
                continue
            if self._sysex is not None:
                if b < 0x80:
                    self._sysex.append(b)
                    continue
                # any status terminates SysEx (0xF7 is the well-formed case)
                events.append(Other(SYSEX_START, bytes(self._sysex)))
                self._sysex = None
                if b == SYSEX_END:
                    continue
            if b >= 0x80:
                self._pending.clear()
                self._status = None
                if b == SYSEX_START:
                    self._sysex = bytearray()
                    self._running = None
                elif b >= 0xF1:
                    self._running = None
                    if _SYSTEM_DATA_LEN[b] == 0:
                        events.append(Other(b, b""))
                    else:
                        self._status = b
                        self._need = _SYSTEM_DATA_LEN[b]
                else:
                    self._status = b
                    self._running = b
                    self._need = _CHANNEL_DATA_LEN[b & 0xF0]
                continue
            # data byte
            if self._status is None:
                if self._running is None:
                    self.stray_bytes += 1
                    continue
                self._status = self._running
                self._need = _CHANNEL_DATA_LEN[self._running & 0xF0]
            self._pending.append(b)
            if len(self._pending) == self._need:
                events.append(self._decode(self._status, bytes(self._pending)))
                self._pending.clear()
                self._status = None
        return events

    @staticmethod
    def _decode(status: int, data: bytes) -> MidiEvent:
        kind = status & 0xF0
        channel = status & 0x0F
        if kind == 0x90:
            return NoteOn(channel, data[0], data[1])
        if kind == 0x80:
            return NoteOff(channel, data[0], data[1])
        if kind == 0xB0:
            return ControlChange(channel, data[0], data[1])
        return Other(status, data)


def serialize(event: MidiEvent) -> bytes:
    """Encode an event with an explicit status byte (never running status)."""
    if isinstance(event, NoteOn):
        return bytes((0x90 | _check_channel(event.channel),
                      _check_7bit("note", event.note),
                      _check_7bit("velocity", event.velocity)))
    if isinstance(event, NoteOff):
        return bytes((0x80 | _check_channel(event.channel),
                      _check_7bit("note", event.note),
                      _check_7bit("velocity", event.velocity)))
    if isinstance(event, ControlChange):
        return bytes((0xB0 | _check_channel(event.channel),
                      _check_7bit("controller", event.controller),
                      _check_7bit("value", event.value)))
    if isinstance(event, Other):
        if not 0x80 <= event.status <= 0xFF:
            raise ValueError(f"status byte out of range: {event.status}")
        if any(b > 127 for b in event.data):
            raise ValueError("data bytes must be 7-bit")
        body = bytes((event.status,)) + event.data
        if event.status == SYSEX_START:
            body += bytes((SYSEX_END,))
        return body
    raise TypeError(f"not a MIDI event: {event!r}")


def normalize_note_off(event: MidiEvent) -> MidiEvent:
    """Rewrite the velocity-0 NoteOn convention as a real NoteOff."""
    if isinstance(event, NoteOn) and event.velocity == 0:
        return NoteOff(event.channel, event.note, 0)
    return event
