"""Deterministic, splittable random source for reproducible experiments.

SplitMix64 streams: tiny state, full 64-bit period, published reference
outputs, and trivially portable.  Every experiment derives one stream per
trial index, so results are identical no matter how trials are batched or
parallelized.  Not for real key generation.
"""

from typing import Tuple

from .errors import ZeroBound

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


class RngState:
    """SplitMix64 state; `next_u64` is a pure function of it."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & MASK64

    def __eq__(self, other):
        return isinstance(other, RngState) and self.state == other.state

    def __repr__(self):
        return f"RngState(0x{self.state:016X})"


def next_u64(s: RngState) -> Tuple[int, RngState]:
    """Advance one step; returns (value, new state)."""
    state = (s.state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31), RngState(state)


def derive_stream(master_seed: int, stream_id: int) -> RngState:
    """Independent stream for one trial: mix stream_id into the seed, then
    scramble once so nearby ids do not yield nearby states."""
    mixed = (master_seed ^ ((stream_id * GOLDEN) & MASK64)) & MASK64
    value, _ = next_u64(RngState(mixed))
    return RngState(value)


def rand_below(s: RngState, bound: int) -> Tuple[int, RngState]:
    """Uniform integer in [0, bound) via rejection sampling (no modulo bias)."""
    if bound < 1:
        raise ZeroBound(f"bound must be >= 1, got {bound}")
    limit = (1 << 64) - ((1 << 64) % bound)
    while True:
        value, s = next_u64(s)
        if value < limit:
            return value % bound, s


def rand_bytes(s: RngState, n: int) -> Tuple[bytes, RngState]:
    """n pseudo-random bytes (each u64 emitted big-endian)."""
    out = bytearray()
    while len(out) < n:
        value, s = next_u64(s)
        out += value.to_bytes(8, "big")
    return bytes(out[:n]), s
