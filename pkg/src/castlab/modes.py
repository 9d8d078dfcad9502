"""ECB application of the cipher to whole images and byte streams.

ECB is deliberate: equal plaintext blocks map to equal ciphertext blocks,
which is exactly the texture-leak behaviour the image experiments
demonstrate.  Image mode refuses pixel counts that are not a multiple of
8 instead of padding, so plain and cipher images always have identical
dimensions and their histograms stay comparable.
"""

from dataclasses import dataclass

import numpy as np

from .core import RoundKeys, Variant, decrypt_words, encrypt_words, key_schedule
from .errors import BadPadding, NotBlockAligned
from .image_io import GrayImage, _as_image

BLOCK_BYTES = 8


@dataclass(frozen=True)
class EcbConfig:
    """Key material plus variant/rounds for one ECB workload."""

    key: bytes
    variant: Variant = Variant.ORIGINAL
    rounds: int = 16

    def round_keys(self) -> RoundKeys:
        return key_schedule(self.key)


def _ecb_words(data: bytes, keys: RoundKeys, variant: Variant, rounds: int, decrypt: bool) -> bytes:
    words = np.frombuffer(data, dtype=">u4").astype(np.uint32).reshape(-1, 2)
    fn = decrypt_words if decrypt else encrypt_words
    l, r = fn(words[:, 0], words[:, 1], keys.km, keys.kr, variant, rounds)
    out = np.empty((len(l), 2), dtype=">u4")
    out[:, 0] = l
    out[:, 1] = r
    return out.tobytes()


def _apply_image(img: GrayImage, cfg: EcbConfig, decrypt: bool) -> GrayImage:
    img = _as_image(img)
    if img.size % BLOCK_BYTES != 0:
        raise NotBlockAligned(f"{img.shape[1]}x{img.shape[0]} image has {img.size} pixels, "
                              f"not a multiple of {BLOCK_BYTES}")
    data = _ecb_words(img.tobytes(), cfg.round_keys(), cfg.variant, cfg.rounds, decrypt)
    return np.frombuffer(data, dtype=np.uint8).reshape(img.shape).copy()


def encrypt_image_ecb(img: GrayImage, cfg: EcbConfig) -> GrayImage:
    """Encrypt pixels row-major in 8-byte groups; dimensions preserved."""
    return _apply_image(img, cfg, decrypt=False)


def decrypt_image_ecb(img: GrayImage, cfg: EcbConfig) -> GrayImage:
    """Inverse of encrypt_image_ecb under the same config."""
    return _apply_image(img, cfg, decrypt=True)


def pkcs7_pad(data: bytes, block: int = BLOCK_BYTES) -> bytes:
    n = block - len(data) % block
    return data + bytes([n]) * n


def pkcs7_unpad(data: bytes, block: int = BLOCK_BYTES) -> bytes:
    if not data or len(data) % block != 0:
        raise BadPadding(f"padded data length {len(data)} is not a positive multiple of {block}")
    n = data[-1]
    if not 1 <= n <= block or data[-n:] != bytes([n]) * n:
        raise BadPadding("invalid PKCS#7 padding bytes")
    return data[:-n]


def encrypt_bytes_ecb(data: bytes, cfg: EcbConfig) -> bytes:
    """PKCS#7-pad then ECB-encrypt; output grows to the next block multiple."""
    return _ecb_words(pkcs7_pad(data), cfg.round_keys(), cfg.variant, cfg.rounds, decrypt=False)


def decrypt_bytes_ecb(data: bytes, cfg: EcbConfig) -> bytes:
    """ECB-decrypt then validate and strip PKCS#7 padding."""
    if not data or len(data) % BLOCK_BYTES != 0:
        raise BadPadding(f"ciphertext length {len(data)} is not a positive multiple of {BLOCK_BYTES}")
    return pkcs7_unpad(_ecb_words(data, cfg.round_keys(), cfg.variant, cfg.rounds, decrypt=True))
