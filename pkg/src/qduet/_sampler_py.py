"""Pure-Python shot-sampling kernel; reference for the Cython build.

Must stay bit-identical to qduet._sampler_cy: same SplitMix64 constants, the
same u = z * 2**-64 conversion and the same cumulative-walk order, so that a
seed replays to the same outcomes whichever kernel is loaded.
"""

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO_NEG64 = 2.0 ** -64


def sample_outcomes(state: int, p0: float, p1: float, p2: float, n: int) -> tuple[int, bytes]:
    """Draw n outcomes in {0..3} from (p0, p1, p2, 1-rest).

    Returns the advanced SplitMix64 state and one outcome byte per shot.
    Probability of outcome 3 is implicit so callers cannot pass an
    inconsistent total.
    """
    c0 = p0
    c1 = c0 + p1
    c2 = c1 + p2
    out = bytearray(n)
    for i in range(n):
        state = (state + _GOLDEN) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        z ^= z >> 31
        u = z * _TWO_NEG64
        out[i] = 0 if u < c0 else 1 if u < c1 else 2 if u < c2 else 3
    return state, bytes(out)
