"""Exact 2-qubit statevector simulator for the entanglement switch circuit.

The circuit is H on the top wire, Rx(pi*s) on the bottom wire, then a CNOT
controlled by the top wire.  Sweeping s from 0 to 1 moves the output between
the correlated Bell state (|00>+|11>)/sqrt(2) and the anti-correlated one
(|01>+|10>)/sqrt(2); measurement shots therefore yield bit pairs that agree
at s=0, disagree at s=1 and are independent at s=0.5.

States are 4-tuples of complex amplitudes indexed |00>, |01>, |10>, |11>,
where the first (left) bit is the top wire.  All operations are pure
functions; randomness comes from an explicitly passed SplitMix64 generator so
that shot sequences replay bit-identically everywhere.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from qduet import sampler

# amplitudes indexed 2*(top bit) + (bottom bit)
State = tuple[complex, complex, complex, complex]
Gate1Q = tuple[tuple[complex, complex], tuple[complex, complex]]
Gate2Q = tuple[tuple[complex, ...], ...]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO_NEG64 = 2.0 ** -64

ZERO_ZERO: State = (1.0 + 0j, 0j, 0j, 0j)


class BitPair(NamedTuple):
    """One measurement shot: b0 is the top qubit, b1 the bottom."""

    b0: int
    b1: int


class SplitMix64:
    """SplitMix64 generator; sequences are bit-identical across languages.

    Fixed constants: golden-ratio increment 0x9E3779B97F4A7C15, finalizer
    multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB, shifts 30/27/31.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1), as next_u64 / 2**64."""
        return self.next_u64() * _TWO_NEG64


def gate_x() -> Gate1Q:
    """Bit-flip gate: swaps |0> and |1>."""
    return ((0j, 1 + 0j), (1 + 0j, 0j))


def gate_h() -> Gate1Q:
    """Hadamard gate: sends |0> to an equal superposition."""
    h = _INV_SQRT2 + 0j
    return ((h, h), (h, -h))


def gate_rx(theta: float) -> Gate1Q:
    """X-axis rotation [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]]."""
    if not math.isfinite(theta):
        raise ValueError(f"non-finite rotation angle: {theta!r}")
    c = math.cos(theta / 2.0) + 0j
    s = -1j * math.sin(theta / 2.0)
    return ((c, s), (s, c))


def gate_cnot() -> Gate2Q:
    """CNOT controlled by the top wire: swaps |10> and |11|."""
    return (
        (1 + 0j, 0j, 0j, 0j),
        (0j, 1 + 0j, 0j, 0j),
        (0j, 0j, 0j, 1 + 0j),
        (0j, 0j, 1 + 0j, 0j),
    )


def apply_1q(state: State, g: Gate1Q, wire: int) -> State:
    """Apply a single-qubit gate to one wire (0 = top, 1 = bottom)."""
    (g00, g01), (g10, g11) = g
    a0, a1, a2, a3 = state
    if wire == 0:
        # amplitude pairs differing in the top bit: (|00>,|10>) and (|01>,|11>)
        return (
            g00 * a0 + g01 * a2,
            g00 * a1 + g01 * a3,
            g10 * a0 + g11 * a2,
            g10 * a1 + g11 * a3,
        )
    if wire == 1:
        return (
            g00 * a0 + g01 * a1,
            g10 * a0 + g11 * a1,
            g00 * a2 + g01 * a3,
            g10 * a2 + g11 * a3,
        )
    raise ValueError(f"wire must be 0 or 1, got {wire}")


def apply_2q(state: State, g: Gate2Q) -> State:
    """Apply a 4x4 gate to the full register."""
    return tuple(sum(g[i][j] * state[j] for j in range(4)) for i in range(4))  # type: ignore[return-value]


def entanglement_switch_state(s: float) -> State:
    """Pre-measurement state of the switch circuit at parameter s in [0, 1].

    Outcome probabilities are p(00) = p(11) = cos^2(pi*s/2)/2 and
    p(01) = p(10) = sin^2(pi*s/2)/2: a cos(pi*s/2)-weighted mix of the
    correlated and anti-correlated Bell states (with a -i relative phase
    that measurement never sees).
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"switch parameter must be in [0, 1], got {s!r}")
    state = apply_1q(ZERO_ZERO, gate_h(), 0)
    state = apply_1q(state, gate_rx(math.pi * s), 1)
    return apply_2q(state, gate_cnot())


def measure_probs(state: State) -> tuple[float, float, float, float]:
    """Born-rule probabilities for |00>, |01>, |10>, |11>."""
    p = tuple(abs(a) ** 2 for a in state)
    total = p[0] + p[1] + p[2] + p[3]
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized: sum |a|^2 = {total!r}")
    return p  # type: ignore[return-value]


def sample_shot(state: State, rng: SplitMix64) -> BitPair:
    """Draw one measurement outcome; advances rng by one u64."""
    p0, p1, p2, _ = measure_probs(state)
    c0 = p0
    c1 = c0 + p1
    c2 = c1 + p2
    u = rng.next_float()
    k = 0 if u < c0 else 1 if u < c1 else 2 if u < c2 else 3
    return BitPair(k >> 1, k & 1)


def run_shots(s: float, n: int, rng: SplitMix64) -> list[BitPair]:
    """Prepare the switch circuit at s and measure it n times."""
    if n < 1:
        raise ValueError(f"shot count must be >= 1, got {n}")
    p0, p1, p2, _ = measure_probs(entanglement_switch_state(s))
    rng.state, outcomes = sampler.sample_outcomes(rng.state, p0, p1, p2, n)
    return [BitPair(k >> 1, k & 1) for k in outcomes]
