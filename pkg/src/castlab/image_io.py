"""8-bit grayscale image I/O, synthesis, and histograms.

Images are numpy uint8 arrays of shape (height, width).  Two on-disk
formats are supported bit-exactly: binary PGM (P5, maxval 255) as the
primary interchange format, and 8-bpp uncompressed palette BMP (40-byte
info header, bottom-up rows padded to 4 bytes).  Color or compressed
files are rejected rather than converted, since every downstream metric
assumes a 256-grey-level matrix.
"""

import struct

import numpy as np
from scipy import ndimage

from .errors import CorruptHeader, IoError, SizeMismatch, UnsupportedFormat
from .rng import derive_stream, rand_bytes

GrayImage = np.ndarray  # (height, width) uint8

SYNTH_KINDS = ("gradient", "smooth_noise", "constant")

_BMP_PALETTE = bytes(b for i in range(256) for b in (i, i, i, 0))


def _as_image(img) -> GrayImage:
    a = np.asarray(img)
    if a.ndim != 2 or a.dtype != np.uint8:
        raise ValueError("image must be a 2-D uint8 array")
    return a


# --- PGM (P5) ---------------------------------------------------------------

def _parse_pgm(buf: bytes) -> GrayImage:
    # header: magic + 3 ASCII ints, whitespace separated, '#' comments allowed
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace():
            pos += 1
        if pos == start:
            raise CorruptHeader("truncated PGM header")
        try:
            fields.append(int(buf[start:pos]))
        except ValueError:
            raise CorruptHeader(f"non-numeric PGM header field {buf[start:pos]!r}") from None
    if pos >= len(buf):
        raise CorruptHeader("PGM header not followed by pixel data")
    pos += 1  # exactly one whitespace byte before raster
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise CorruptHeader(f"bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"PGM maxval must be 255, got {maxval}")
    data = buf[pos:]
    if len(data) != width * height:
        raise SizeMismatch(f"PGM raster is {len(data)} bytes, expected {width * height}")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width).copy()


def _write_pgm(img: GrayImage) -> bytes:
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


# --- BMP (8 bpp, BI_RGB, 256-entry palette, bottom-up) ----------------------

def _parse_bmp(buf: bytes) -> GrayImage:
    if len(buf) < 54:
        raise CorruptHeader("BMP shorter than its fixed headers")
    _, data_offset = struct.unpack_from("<I4xI", buf, 2)
    (info_size, width, height, planes, bitcount, compression,
     _, _, _, clr_used, _) = struct.unpack_from("<IiiHHIIiiII", buf, 14)
    if info_size != 40:
        raise UnsupportedFormat(f"BMP info header must be 40 bytes, got {info_size}")
    if bitcount != 8:
        raise UnsupportedFormat(f"BMP must be 8 bits per pixel, got {bitcount}")
    if compression != 0:
        raise UnsupportedFormat(f"BMP must be uncompressed (BI_RGB), got compression {compression}")
    if width < 1 or height == 0 or planes != 1:
        raise CorruptHeader(f"bad BMP geometry {width}x{height}, {planes} planes")
    if height < 0:
        raise UnsupportedFormat("top-down BMP rows are not supported")
    n_palette = clr_used if clr_used else 256
    palette = buf[54:54 + 4 * n_palette]
    if len(palette) < 4 * n_palette:
        raise CorruptHeader("BMP palette truncated")
    ent = np.frombuffer(palette, dtype=np.uint8).reshape(-1, 4)
    if not (np.array_equal(ent[:, 0], ent[:, 1]) and np.array_equal(ent[:, 1], ent[:, 2])):
        raise UnsupportedFormat("BMP palette is not grayscale")
    stride = width + (-width) % 4
    need = stride * height
    if len(buf) - data_offset < need:
        raise SizeMismatch(f"BMP raster is {len(buf) - data_offset} bytes, expected {need}")
    rows = np.frombuffer(buf, dtype=np.uint8, count=need, offset=data_offset)
    # grey level is the palette index itself; rows are stored bottom-up
    return rows.reshape(height, stride)[::-1, :width].copy()


def _write_bmp(img: GrayImage) -> bytes:
    h, w = img.shape
    stride = w + (-w) % 4
    raster = np.zeros((h, stride), dtype=np.uint8)
    raster[:, :w] = img[::-1]
    data = raster.tobytes()
    file_header = struct.pack("<2sIHHI", b"BM", 14 + 40 + 1024 + len(data), 0, 0, 1078)
    info_header = struct.pack("<IiiHHIIiiII", 40, w, h, 1, 8, 0, len(data), 0, 0, 256, 0)
    return file_header + info_header + _BMP_PALETTE + data


# --- public API --------------------------------------------------------------

def load_image(path) -> GrayImage:
    """Read a PGM (P5) or 8-bpp grayscale BMP; pixel values preserved exactly."""
    with open(path, "rb") as f:
        buf = f.read()
    if buf[:2] == b"P5":
        return _parse_pgm(buf)
    if buf[:2] == b"BM":
        return _parse_bmp(buf)
    raise UnsupportedFormat(f"{path}: not a P5 PGM or BMP file")


def save_image(img: GrayImage, path, fmt: str = None) -> None:
    """Write `img` as PGM or BMP (from `fmt` or the file extension)."""
    img = _as_image(img)
    if fmt is None:
        name = str(path).lower()
        fmt = "bmp" if name.endswith(".bmp") else "pgm"
    if fmt == "pgm":
        payload = _write_pgm(img)
    elif fmt == "bmp":
        payload = _write_bmp(img)
    else:
        raise ValueError(f"format must be 'pgm' or 'bmp', got {fmt!r}")
    try:
        with open(path, "wb") as f:
            f.write(payload)
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e


def synth_image(kind: str, width: int, height: int, seed: int = 0) -> GrayImage:
    """Deterministic test image.

    gradient      pixel(x, y) = (x + y) mod 256
    smooth_noise  seeded random bytes, 9x9 mean filter, rescaled to [0, 255];
                  adjacent-pixel correlation comes out ~0.89, close to a
                  natural photograph
    constant      every pixel = seed mod 256
    """
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be >= 1, got {width}x{height}")
    if kind == "gradient":
        return (np.add.outer(np.arange(height), np.arange(width)) % 256).astype(np.uint8)
    if kind == "constant":
        return np.full((height, width), seed % 256, dtype=np.uint8)
    if kind == "smooth_noise":
        raw, _ = rand_bytes(derive_stream(seed, 0), width * height)
        noise = np.frombuffer(raw, dtype=np.uint8).reshape(height, width).astype(np.float64)
        blurred = ndimage.uniform_filter(noise, size=9, mode="reflect")
        lo, hi = blurred.min(), blurred.max()
        if hi == lo:
            return np.zeros((height, width), dtype=np.uint8)
        scaled = np.rint((blurred - lo) * (255.0 / (hi - lo)))
        return np.clip(scaled, 0, 255).astype(np.uint8)
    raise ValueError(f"kind must be one of {SYNTH_KINDS}, got {kind!r}")


def histogram(img: GrayImage) -> np.ndarray:
    """Exact occurrence count of each grey level; shape (256,), sums to w*h."""
    return np.bincount(_as_image(img).ravel(), minlength=256).astype(np.int64)
