"""ECB image/byte modes and PKCS#7 padding."""

import numpy as np
import pytest

from castlab.core import Block64, Variant, encrypt_block, key_schedule
from castlab.errors import BadPadding, NotBlockAligned
from castlab.modes import (EcbConfig, decrypt_bytes_ecb, decrypt_image_ecb,
                           encrypt_bytes_ecb, encrypt_image_ecb, pkcs7_pad,
                           pkcs7_unpad)
from castlab.image_io import synth_image
from castlab.rng import RngState, rand_bytes

KEY = bytes.fromhex("ADF278565E262AD1F5DEC94A0BF25B27")


def cfg(variant=Variant.ORIGINAL, rounds=16):
    return EcbConfig(key=KEY, variant=variant, rounds=rounds)


def test_equal_plain_blocks_give_equal_cipher_blocks():
    # the ECB property the texture-leak experiments rely on
    row = np.tile(np.arange(8, dtype=np.uint8), 2).reshape(1, 16)
    out = encrypt_image_ecb(row, cfg())
    assert np.array_equal(out[0, :8], out[0, 8:])
    assert not np.array_equal(out[0, :8], row[0, :8])


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("rounds", [1, 7, 16])
def test_image_roundtrip(variant, rounds):
    img = synth_image("smooth_noise", 64, 32, seed=9)
    c = cfg(variant, rounds)
    enc = encrypt_image_ecb(img, c)
    assert enc.shape == img.shape
    assert not np.array_equal(enc, img)
    assert np.array_equal(decrypt_image_ecb(enc, c), img)


def test_image_blocks_match_scalar_cipher():
    img = synth_image("smooth_noise", 40, 20, seed=4)
    enc = encrypt_image_ecb(img, cfg())
    keys = key_schedule(KEY)
    flat_in, flat_out = img.ravel(), enc.ravel()
    for block_index in (0, 1, 37, 99):  # 100 blocks total
        chunk = flat_in[block_index * 8:(block_index + 1) * 8].tobytes()
        expected = encrypt_block(Block64.from_bytes(chunk), keys)
        assert flat_out[block_index * 8:(block_index + 1) * 8].tobytes() == expected.to_bytes()


def test_not_block_aligned():
    img = synth_image("gradient", 3, 3)  # 9 pixels
    with pytest.raises(NotBlockAligned):
        encrypt_image_ecb(img, cfg())
    with pytest.raises(NotBlockAligned):
        decrypt_image_ecb(img, cfg())


def test_pkcs7_rules():
    assert pkcs7_pad(b"") == b"\x08" * 8
    assert pkcs7_pad(b"A" * 8)[8:] == b"\x08" * 8
    assert len(encrypt_bytes_ecb(b"", cfg())) == 8
    assert len(encrypt_bytes_ecb(b"x" * 8, cfg())) == 16
    for n in range(0, 17):
        assert len(encrypt_bytes_ecb(b"y" * n, cfg())) == (n // 8 + 1) * 8


def test_pkcs7_unpad_validation():
    with pytest.raises(BadPadding):
        pkcs7_unpad(b"")
    with pytest.raises(BadPadding):
        pkcs7_unpad(b"abc")  # not a block multiple
    with pytest.raises(BadPadding):
        pkcs7_unpad(b"\x00" * 8)  # pad byte 0
    with pytest.raises(BadPadding):
        pkcs7_unpad(b"\x01" * 7 + b"\x09")  # pad byte > block
    with pytest.raises(BadPadding):
        pkcs7_unpad(b"\x03\x03\x01\x02\x03\x02\x02\x03")  # wrong fill bytes
    assert pkcs7_unpad(b"ab\x06\x06\x06\x06\x06\x06") == b"ab"


def test_bytes_roundtrip_all_lengths():
    s = RngState(31)
    for length in range(0, 65):
        data, s = rand_bytes(s, length)
        for variant in Variant:
            c = cfg(variant)
            assert decrypt_bytes_ecb(encrypt_bytes_ecb(data, c), c) == data


def test_bytes_decrypt_rejects_bad_lengths():
    with pytest.raises(BadPadding):
        decrypt_bytes_ecb(b"", cfg())
    with pytest.raises(BadPadding):
        decrypt_bytes_ecb(b"1234567", cfg())


def test_variants_are_incompatible():
    data = b"0123456789abcdef"
    enc = encrypt_bytes_ecb(data, cfg(Variant.ORIGINAL))
    with pytest.raises(BadPadding):
        # wrong variant scrambles the padding with overwhelming probability
        decrypt_bytes_ecb(enc, cfg(Variant.MODIFIED))
