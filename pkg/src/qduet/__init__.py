"""qduet: entangles two MIDI instruments through a simulated 2-qubit switch.

Incoming notes are relayed untouched; every 100ms the gap between the two
players' average pitches sets a circuit parameter, seven measurement shots
are drawn, and the resulting correlated (or anti-correlated) bits are packed
into Control Change values ramped out to each instrument.
"""

__version__ = "0.1.0"
