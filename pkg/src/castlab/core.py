"""CAST-128 block cipher (RFC 2144) plus a modified round-function variant.

The cipher is a 16-round Feistel network on 64-bit blocks with keys of
40-128 bits (8-bit steps).  Two variants share the key schedule and
S-boxes and differ only in how the round function combines its four S-box
words:

    type 1 rounds (1,4,7,10,13,16):  I = rotl32(km + R, kr)
        original:  F = ((S1[Ia] ^ S2[Ib]) - S3[Ic]) + S4[Id]
        modified:  F = (S1[Ia] ^ S2[Ib]) - (S3[Ic] + S4[Id])
    type 2 rounds (2,5,8,11,14):     I = rotl32(km ^ R, kr)
        original:  F = ((S1[Ia] - S2[Ib]) + S3[Ic]) ^ S4[Id]
        modified:  F = (S1[Ia] - S2[Ib]) + (S3[Ic] ^ S4[Id])
    type 3 rounds (3,6,9,12,15):     I = rotl32(km - R, kr)
        original:  F = ((S1[Ia] + S2[Ib]) ^ S3[Ic]) - S4[Id]
        modified:  F = (S1[Ia] + S2[Ib]) ^ (S3[Ic] - S4[Id])

Ia is the most significant byte of I, Id the least.  All + and - are
modulo 2**32.  The regrouped (modified) form lets the first and third
S-box combines execute in parallel on superscalar hardware; on type-1
rounds it equals the original output minus 2*S4[Id] mod 2**32.

Reduced-round operation uses the first `rounds` subkeys followed by the
usual final swap.  With `rounds=12` this is exactly the RFC 2144
short-key (<= 80 bit) cipher, which is how the Appendix B short-key test
vectors are reproduced.

Everything here is a pure function of its inputs; the module also
provides a numpy bulk path (`encrypt_words`/`decrypt_words`) that
processes many independent blocks at once and returns bit-identical
results to the scalar functions.
"""

import enum
import struct
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidBitIndex, InvalidKeyLength, InvalidRounds
from .sboxes import S1, S2, S3, S4, S5, S6, S7, S8

MASK32 = 0xFFFFFFFF


class Variant(enum.Enum):
    """Round-function selection; key schedule and S-boxes are shared."""

    ORIGINAL = "original"
    MODIFIED = "modified"

    @classmethod
    def from_name(cls, name: str) -> "Variant":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown variant {name!r} (expected 'original' or 'modified')") from None


class Block64(NamedTuple):
    """One 64-bit block as a pair of 32-bit words, `left` most significant."""

    left: int
    right: int

    @classmethod
    def from_bytes(cls, data: bytes) -> "Block64":
        if len(data) != 8:
            raise ValueError(f"block must be 8 bytes, got {len(data)}")
        l, r = struct.unpack(">2L", data)
        return cls(l, r)

    def to_bytes(self) -> bytes:
        return struct.pack(">2L", self.left, self.right)

    @classmethod
    def from_hex(cls, text: str) -> "Block64":
        return cls.from_bytes(bytes.fromhex(text))

    def to_hex(self) -> str:
        return self.to_bytes().hex().upper()


@dataclass(frozen=True)
class RoundKeys:
    """16 masking subkeys km (32-bit) and 16 rotation subkeys kr (5-bit)."""

    km: tuple
    kr: tuple

    def __post_init__(self):
        assert len(self.km) == 16 and len(self.kr) == 16
        assert all(0 <= r <= 31 for r in self.kr)


def rotl32(x: int, n: int) -> int:
    """Rotate a 32-bit word left by n bits (0 <= n <= 31)."""
    return ((x << n) | (x >> (32 - n))) & MASK32


def key_from_hex(text: str) -> bytes:
    """Parse a key given as 10-32 hex digits (even count)."""
    text = text.strip()
    if len(text) % 2 != 0:
        raise InvalidKeyLength(f"hex key must have an even number of digits, got {len(text)}")
    key = bytes.fromhex(text)
    if not 5 <= len(key) <= 16:
        raise InvalidKeyLength(f"key must be 5..16 octets, got {len(key)}")
    return key


def flip_key_bit(key: bytes, bit: int) -> bytes:
    """Flip bit `bit` of the key; bit 0 is the MSB of the first octet."""
    if not 0 <= bit < len(key) * 8:
        raise InvalidBitIndex(f"bit {bit} out of range for a {len(key) * 8}-bit key")
    out = bytearray(key)
    out[bit // 8] ^= 0x80 >> (bit % 8)
    return bytes(out)


# --- key schedule (RFC 2144 section 2.4) -----------------------------------
#
# The schedule views the zero-padded 16-byte key as bytes x0..xF, mixes it
# through a scratch buffer z0..zF, and extracts 16 subkey words per pass.
# The first pass yields the masking keys km1..km16, the second pass (carrying
# the mutated x forward) yields the rotation keys kr1..kr16 (low 5 bits).

def _word(b, j):
    i = 4 * j
    return (b[i] << 24) | (b[i + 1] << 16) | (b[i + 2] << 8) | b[i + 3]


def _put_word(b, j, v):
    i = 4 * j
    b[i] = (v >> 24) & 0xFF
    b[i + 1] = (v >> 16) & 0xFF
    b[i + 2] = (v >> 8) & 0xFF
    b[i + 3] = v & 0xFF


def _mix_z_from_x(x, z):
    _put_word(z, 0, _word(x, 0) ^ S5[x[13]] ^ S6[x[15]] ^ S7[x[12]] ^ S8[x[14]] ^ S7[x[8]])
    _put_word(z, 1, _word(x, 2) ^ S5[z[0]] ^ S6[z[2]] ^ S7[z[1]] ^ S8[z[3]] ^ S8[x[10]])
    _put_word(z, 2, _word(x, 3) ^ S5[z[7]] ^ S6[z[6]] ^ S7[z[5]] ^ S8[z[4]] ^ S5[x[9]])
    _put_word(z, 3, _word(x, 1) ^ S5[z[10]] ^ S6[z[9]] ^ S7[z[11]] ^ S8[z[8]] ^ S6[x[11]])


def _mix_x_from_z(z, x):
    _put_word(x, 0, _word(z, 2) ^ S5[z[5]] ^ S6[z[7]] ^ S7[z[4]] ^ S8[z[6]] ^ S7[z[0]])
    _put_word(x, 1, _word(z, 0) ^ S5[x[0]] ^ S6[x[2]] ^ S7[x[1]] ^ S8[x[3]] ^ S8[z[2]])
    _put_word(x, 2, _word(z, 1) ^ S5[x[7]] ^ S6[x[6]] ^ S7[x[5]] ^ S8[x[4]] ^ S5[z[1]])
    _put_word(x, 3, _word(z, 3) ^ S5[x[10]] ^ S6[x[9]] ^ S7[x[11]] ^ S8[x[8]] ^ S6[z[3]])


def _schedule_pass(x):
    """One 16-subkey pass over key bytes x (mutated in place)."""
    z = [0] * 16
    k = [0] * 16

    _mix_z_from_x(x, z)
    k[0] = S5[z[8]] ^ S6[z[9]] ^ S7[z[7]] ^ S8[z[6]] ^ S5[z[2]]
    k[1] = S5[z[10]] ^ S6[z[11]] ^ S7[z[5]] ^ S8[z[4]] ^ S6[z[6]]
    k[2] = S5[z[12]] ^ S6[z[13]] ^ S7[z[3]] ^ S8[z[2]] ^ S7[z[9]]
    k[3] = S5[z[14]] ^ S6[z[15]] ^ S7[z[1]] ^ S8[z[0]] ^ S8[z[12]]

    _mix_x_from_z(z, x)
    k[4] = S5[x[3]] ^ S6[x[2]] ^ S7[x[12]] ^ S8[x[13]] ^ S5[x[8]]
    k[5] = S5[x[1]] ^ S6[x[0]] ^ S7[x[14]] ^ S8[x[15]] ^ S6[x[13]]
    k[6] = S5[x[7]] ^ S6[x[6]] ^ S7[x[8]] ^ S8[x[9]] ^ S7[x[3]]
    k[7] = S5[x[5]] ^ S6[x[4]] ^ S7[x[10]] ^ S8[x[11]] ^ S8[x[7]]

    _mix_z_from_x(x, z)
    k[8] = S5[z[3]] ^ S6[z[2]] ^ S7[z[12]] ^ S8[z[13]] ^ S5[z[9]]
    k[9] = S5[z[1]] ^ S6[z[0]] ^ S7[z[14]] ^ S8[z[15]] ^ S6[z[12]]
    k[10] = S5[z[7]] ^ S6[z[6]] ^ S7[z[8]] ^ S8[z[9]] ^ S7[z[2]]
    k[11] = S5[z[5]] ^ S6[z[4]] ^ S7[z[10]] ^ S8[z[11]] ^ S8[z[6]]

    _mix_x_from_z(z, x)
    k[12] = S5[x[8]] ^ S6[x[9]] ^ S7[x[7]] ^ S8[x[6]] ^ S5[x[3]]
    k[13] = S5[x[10]] ^ S6[x[11]] ^ S7[x[5]] ^ S8[x[4]] ^ S6[x[7]]
    k[14] = S5[x[12]] ^ S6[x[13]] ^ S7[x[3]] ^ S8[x[2]] ^ S7[x[8]]
    k[15] = S5[x[14]] ^ S6[x[15]] ^ S7[x[1]] ^ S8[x[0]] ^ S8[x[13]]
    return k


def key_schedule(key: bytes) -> RoundKeys:
    """Expand a 5..16 octet key into 16 masking and 16 rotation subkeys.

    Short keys are zero-padded to 16 octets before scheduling.
    """
    if not 5 <= len(key) <= 16:
        raise InvalidKeyLength(f"key must be 5..16 octets, got {len(key)}")
    x = list(key) + [0] * (16 - len(key))
    km = _schedule_pass(x)
    kr = [k & 0x1F for k in _schedule_pass(x)]
    return RoundKeys(km=tuple(km), kr=tuple(kr))


# --- round function and Feistel network ------------------------------------

def round_function(round_index: int, variant: Variant, km: int, kr: int, r_prev: int) -> int:
    """F for one round: keyed mix, rotation, S-box lookups, three combines."""
    t = (round_index - 1) % 3
    if t == 0:
        i = rotl32((km + r_prev) & MASK32, kr)
    elif t == 1:
        i = rotl32(km ^ r_prev, kr)
    else:
        i = rotl32((km - r_prev) & MASK32, kr)
    a = S1[i >> 24]
    b = S2[(i >> 16) & 0xFF]
    c = S3[(i >> 8) & 0xFF]
    d = S4[i & 0xFF]
    if variant is Variant.ORIGINAL:
        if t == 0:
            return ((a ^ b) - c + d) & MASK32
        if t == 1:
            return ((a - b + c) & MASK32) ^ d
        return ((((a + b) & MASK32) ^ c) - d) & MASK32
    if t == 0:
        return ((a ^ b) - c - d) & MASK32
    if t == 1:
        return (a - b + (c ^ d)) & MASK32
    return ((a + b) & MASK32) ^ ((c - d) & MASK32)


def _check_rounds(rounds: int) -> None:
    if not isinstance(rounds, int) or not 1 <= rounds <= 16:
        raise InvalidRounds(f"rounds must be in [1, 16], got {rounds!r}")


def encrypt_block(block: Block64, keys: RoundKeys, variant: Variant = Variant.ORIGINAL,
                  rounds: int = 16) -> Block64:
    """Encrypt one block; reduced rounds use the first `rounds` subkeys."""
    _check_rounds(rounds)
    l, r = block
    km, kr = keys.km, keys.kr
    for i in range(1, rounds + 1):
        l, r = r, l ^ round_function(i, variant, km[i - 1], kr[i - 1], r)
    return Block64(r, l)


def decrypt_block(block: Block64, keys: RoundKeys, variant: Variant = Variant.ORIGINAL,
                  rounds: int = 16) -> Block64:
    """Exact inverse of encrypt_block (same network, subkeys in reverse)."""
    _check_rounds(rounds)
    l, r = block
    km, kr = keys.km, keys.kr
    for i in range(rounds, 0, -1):
        l, r = r, l ^ round_function(i, variant, km[i - 1], kr[i - 1], r)
    return Block64(r, l)


# --- numpy bulk path --------------------------------------------------------
#
# ECB-style workloads encrypt tens of thousands of independent blocks; doing
# that block-by-block in Python dominates every experiment's runtime.  The
# functions below run the identical network over uint32 arrays.  Subkeys may
# be scalars (one key for the whole batch, shape (16,)) or per-block arrays
# (shape (16, n)).  Output order always equals input order, so results are
# indistinguishable from a sequential scalar loop.

_S1V = np.array(S1, dtype=np.uint32)
_S2V = np.array(S2, dtype=np.uint32)
_S3V = np.array(S3, dtype=np.uint32)
_S4V = np.array(S4, dtype=np.uint32)

ArrayLike = Union[Sequence[int], np.ndarray]


def _round_words(round_index, variant, km, kr, r):
    t = (round_index - 1) % 3
    if t == 0:
        v = km + r
    elif t == 1:
        v = km ^ r
    else:
        v = km - r
    inv = (np.uint32(32) - kr) & np.uint32(31)
    i = (v << kr) | (v >> inv)
    a = _S1V[i >> np.uint32(24)]
    b = _S2V[(i >> np.uint32(16)) & np.uint32(0xFF)]
    c = _S3V[(i >> np.uint32(8)) & np.uint32(0xFF)]
    d = _S4V[i & np.uint32(0xFF)]
    if variant is Variant.ORIGINAL:
        if t == 0:
            return (a ^ b) - c + d
        if t == 1:
            return (a - b + c) ^ d
        return ((a + b) ^ c) - d
    if t == 0:
        return (a ^ b) - c - d
    if t == 1:
        return a - b + (c ^ d)
    return (a + b) ^ (c - d)


def _as_subkey_arrays(km: ArrayLike, kr: ArrayLike):
    km_a = np.asarray(km, dtype=np.uint32)
    kr_a = np.asarray(kr, dtype=np.uint32)
    if km_a.shape[0] != 16 or kr_a.shape[0] != 16:
        raise ValueError("subkey arrays must have 16 rows")
    return km_a, kr_a


def encrypt_words(left: np.ndarray, right: np.ndarray, km: ArrayLike, kr: ArrayLike,
                  variant: Variant = Variant.ORIGINAL, rounds: int = 16):
    """Encrypt n independent blocks given as uint32 arrays (left, right)."""
    _check_rounds(rounds)
    km_a, kr_a = _as_subkey_arrays(km, kr)
    l = np.asarray(left, dtype=np.uint32)
    r = np.asarray(right, dtype=np.uint32)
    for i in range(1, rounds + 1):
        l, r = r, l ^ _round_words(i, variant, km_a[i - 1], kr_a[i - 1], r)
    return r, l


def decrypt_words(left: np.ndarray, right: np.ndarray, km: ArrayLike, kr: ArrayLike,
                  variant: Variant = Variant.ORIGINAL, rounds: int = 16):
    """Inverse of encrypt_words."""
    _check_rounds(rounds)
    km_a, kr_a = _as_subkey_arrays(km, kr)
    l = np.asarray(left, dtype=np.uint32)
    r = np.asarray(right, dtype=np.uint32)
    for i in range(rounds, 0, -1):
        l, r = r, l ^ _round_words(i, variant, km_a[i - 1], kr_a[i - 1], r)
    return r, l
