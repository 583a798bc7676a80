"""Tonal similarity: recent-note averages reduced to a switch parameter.

Each player keeps a ring of their last 8 played notes.  The gap between the
two ring averages, folded mod 12 and rounded to the nearest semitone, becomes
s in {0, 1/12, ..., 11/12}: 0 for a shared tonal centre (fully correlated
output), growing toward the anti-correlated end as the centres drift apart.
"""

from __future__ import annotations

import math
from collections import deque

DEFAULT_WINDOW = 8


class NoteWindow:
    """Ring buffer of the most recent MIDI note numbers for one player."""

    def __init__(self, capacity: int = DEFAULT_WINDOW):
        if capacity < 1:
            raise ValueError(f"window capacity must be >= 1, got {capacity}")
        self._notes: deque[int] = deque(maxlen=capacity)

    def push(self, note: int) -> None:
        if not 0 <= note <= 127:
            raise ValueError(f"note out of range: {note}")
        self._notes.append(note)

    def average(self) -> float | None:
        """Mean note number, or None while no note has been played."""
        if not self._notes:
            return None
        return sum(self._notes) / len(self._notes)

    @property
    def notes(self) -> tuple[int, ...]:
        return tuple(self._notes)

    def __len__(self) -> int:
        return len(self._notes)


def similarity(avg_a: float, avg_b: float) -> float:
    """Switch parameter for two average pitches.

    The absolute gap is folded mod 12 (an octave apart counts as identical)
    and rounded half-up to whole semitones, so the result is always a
    multiple of 1/12 in [0, 1).
    """
    gap = abs(avg_a - avg_b) % 12.0
    q = math.floor(gap + 0.5) % 12
    return q / 12.0


def current_parameter(window_a: NoteWindow, window_b: NoteWindow) -> float:
    """Similarity of the two window averages; 0 until both have notes.

    The correlated end is the musically concordant default, so play starts
    there rather than waiting for both players.
    """
    avg_a = window_a.average()
    avg_b = window_b.average()
    if avg_a is None or avg_b is None:
        return 0.0
    return similarity(avg_a, avg_b)
