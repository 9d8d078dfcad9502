"""Security-evaluation battery: avalanche, encryption quality, key
sensitivity, histogram uniformity, and adjacent-pixel correlation.

Experiments draw every trial from its own derived RNG stream
(stream id = trial index), so a report is byte-identical no matter how
many workers execute it.  All statistics accumulate in 64-bit integers or
doubles; comparator tallies always satisfy wins + ties = samples.
"""

import csv
import enum
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .core import (Block64, Variant, encrypt_words, flip_key_bit, key_schedule)
from .errors import (DegenerateVariance, EmptyHistogram, InvalidBitIndex,
                     InvalidRounds, SizeMismatch)
from .image_io import GrayImage, _as_image, histogram
from .modes import EcbConfig, decrypt_image_ecb, encrypt_image_ecb
from .rng import derive_stream, next_u64, rand_below

COMPARATORS = ("closer_to_32", "greater")
AVALANCHE_MODES = ("plaintext_flip", "key_flip")


class Comparison(enum.Enum):
    FIRST_BETTER = "first_better"
    SECOND_BETTER = "second_better"
    TIE = "tie"


def hamming64(a: Block64, b: Block64) -> int:
    """Number of differing bits between two 64-bit blocks."""
    return (a.left ^ b.left).bit_count() + (a.right ^ b.right).bit_count()


def popcount_u64(x: np.ndarray) -> np.ndarray:
    """Per-element bit count of a uint64 array (SWAR)."""
    x = np.asarray(x, dtype=np.uint64)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((x * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def avalanche_compare(d1: int, d2: int, mode: str = "closer_to_32") -> Comparison:
    """Which of two Hamming distances shows the better avalanche.

    closer_to_32: smaller |d - 32| wins (ideal avalanche flips half of 64
    bits).  greater: larger distance wins.  Equal scores tie.
    """
    if mode == "closer_to_32":
        s1, s2 = abs(d1 - 32), abs(d2 - 32)
        if s1 < s2:
            return Comparison.FIRST_BETTER
        if s2 < s1:
            return Comparison.SECOND_BETTER
        return Comparison.TIE
    if mode == "greater":
        if d1 > d2:
            return Comparison.FIRST_BETTER
        if d2 > d1:
            return Comparison.SECOND_BETTER
        return Comparison.TIE
    raise ValueError(f"comparator must be one of {COMPARATORS}, got {mode!r}")


# --- avalanche experiment ----------------------------------------------------

@dataclass(frozen=True)
class AvalancheConfig:
    """One avalanche run: flip a plaintext or key bit per trial and measure
    ciphertext Hamming distances under both variants."""

    mode: str                      # "plaintext_flip" | "key_flip"
    samples: int
    rounds: int
    master_key: bytes
    seed: int = 0
    comparator: str = "closer_to_32"
    fixed_key_bit: Optional[int] = None  # key_flip only; None = fresh random bit per trial
    workers: int = 1


@dataclass(frozen=True)
class AvalancheTable:
    """Tally of comparator outcomes plus distance moments per variant."""

    rounds: int
    samples: int
    wins_original: int
    wins_modified: int
    ties: int
    mean_distance_original: float
    mean_distance_modified: float
    sd_distance_original: float
    sd_distance_modified: float

    def to_json_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "samples": self.samples,
            "wins_original": self.wins_original,
            "wins_modified": self.wins_modified,
            "ties": self.ties,
            "mean_distance_original": self.mean_distance_original,
            "mean_distance_modified": self.mean_distance_modified,
            "sd_distance_original": self.sd_distance_original,
            "sd_distance_modified": self.sd_distance_modified,
        }


def _split_u64(words: np.ndarray):
    return (words >> np.uint64(32)).astype(np.uint32), (words & np.uint64(0xFFFFFFFF)).astype(np.uint32)


def _join_u64(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return (left.astype(np.uint64) << np.uint64(32)) | right.astype(np.uint64)


def _encrypt_u64(words: np.ndarray, keys, variant: Variant, rounds: int) -> np.ndarray:
    l, r = _split_u64(words)
    cl, cr = encrypt_words(l, r, keys.km, keys.kr, variant, rounds)
    return _join_u64(cl, cr)


def _chunk_bounds(n: int, workers: int) -> List[Tuple[int, int]]:
    workers = max(1, min(workers, n))
    step = -(-n // workers)
    return [(lo, min(lo + step, n)) for lo in range(0, n, step)]


def _moments(d: np.ndarray) -> Tuple[float, float]:
    # exact integer sums keep results independent of summation order
    n = len(d)
    total = int(d.sum())
    total_sq = int((d * d).sum())
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, float(np.sqrt(var))


def avalanche_experiment(cfg: AvalancheConfig) -> AvalancheTable:
    """Run cfg.samples single-bit-flip trials and tabulate both variants.

    Trial i uses stream i: draw a random 64-bit plaintext, then the bit to
    flip.  plaintext_flip encrypts the pair of plaintexts under the master
    key; key_flip encrypts the one plaintext under the master key and under
    the key with one bit flipped.
    """
    if cfg.mode not in AVALANCHE_MODES:
        raise ValueError(f"mode must be one of {AVALANCHE_MODES}, got {cfg.mode!r}")
    if cfg.comparator not in COMPARATORS:
        raise ValueError(f"comparator must be one of {COMPARATORS}, got {cfg.comparator!r}")
    if cfg.samples < 1:
        raise ValueError(f"samples must be >= 1, got {cfg.samples}")
    if not 1 <= cfg.rounds <= 16:
        raise InvalidRounds(f"rounds must be in [1, 16], got {cfg.rounds}")
    key_bits = len(cfg.master_key) * 8
    if cfg.fixed_key_bit is not None and not 0 <= cfg.fixed_key_bit < key_bits:
        raise InvalidBitIndex(f"fixed_key_bit {cfg.fixed_key_bit} out of range for a {key_bits}-bit key")

    n = cfg.samples
    pts = np.empty(n, dtype=np.uint64)
    bits = np.empty(n, dtype=np.int64)
    for i in range(n):
        s = derive_stream(cfg.seed, i)
        value, s = next_u64(s)
        pts[i] = value
        if cfg.mode == "plaintext_flip":
            bits[i], s = rand_below(s, 64)
        elif cfg.fixed_key_bit is not None:
            bits[i] = cfg.fixed_key_bit
        else:
            bits[i], s = rand_below(s, key_bits)

    base_keys = key_schedule(cfg.master_key)
    dist = {v: np.empty(n, dtype=np.int64) for v in Variant}

    if cfg.mode == "plaintext_flip":
        flipped = pts ^ (np.uint64(1) << bits.astype(np.uint64))

        def run_chunk(lo, hi):
            for v in Variant:
                c1 = _encrypt_u64(pts[lo:hi], base_keys, v, cfg.rounds)
                c2 = _encrypt_u64(flipped[lo:hi], base_keys, v, cfg.rounds)
                dist[v][lo:hi] = popcount_u64(c1 ^ c2)
    else:
        flipped_keys = {int(b): key_schedule(flip_key_bit(cfg.master_key, int(b)))
                        for b in np.unique(bits)}

        def run_chunk(lo, hi):
            seg_bits = bits[lo:hi]
            for v in Variant:
                c1 = _encrypt_u64(pts[lo:hi], base_keys, v, cfg.rounds)
                out = dist[v][lo:hi]
                for b, keys2 in flipped_keys.items():
                    idx = np.nonzero(seg_bits == b)[0]
                    if len(idx):
                        c2 = _encrypt_u64(pts[lo:hi][idx], keys2, v, cfg.rounds)
                        out[idx] = popcount_u64(c1[idx] ^ c2)

    chunks = _chunk_bounds(n, cfg.workers)
    if len(chunks) == 1:
        run_chunk(*chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            list(pool.map(lambda c: run_chunk(*c), chunks))

    d1, d2 = dist[Variant.ORIGINAL], dist[Variant.MODIFIED]
    if cfg.comparator == "closer_to_32":
        s1, s2 = np.abs(d1 - 32), np.abs(d2 - 32)
        wins_original = int(np.count_nonzero(s1 < s2))
        wins_modified = int(np.count_nonzero(s2 < s1))
    else:
        wins_original = int(np.count_nonzero(d1 > d2))
        wins_modified = int(np.count_nonzero(d2 > d1))
    mean1, sd1 = _moments(d1)
    mean2, sd2 = _moments(d2)
    return AvalancheTable(
        rounds=cfg.rounds, samples=n,
        wins_original=wins_original, wins_modified=wins_modified,
        ties=n - wins_original - wins_modified,
        mean_distance_original=mean1, mean_distance_modified=mean2,
        sd_distance_original=sd1, sd_distance_modified=sd2,
    )


# --- encryption quality ------------------------------------------------------

def encryption_quality(plain: GrayImage, cipher: GrayImage) -> float:
    """Mean absolute histogram deviation: sum(|H(cipher) - H(plain)|) / 256."""
    plain, cipher = _as_image(plain), _as_image(cipher)
    if plain.shape != cipher.shape:
        raise SizeMismatch(f"images differ in size: {plain.shape} vs {cipher.shape}")
    return float(np.abs(histogram(cipher) - histogram(plain)).sum()) / 256.0


def eq_vs_rounds(img: GrayImage, key: bytes, variant: Variant,
                 rounds_list: Sequence[int]) -> List[Tuple[int, float]]:
    """Encryption quality of `img` as a function of round count."""
    out = []
    for rounds in rounds_list:
        cipher = encrypt_image_ecb(img, EcbConfig(key=key, variant=variant, rounds=rounds))
        out.append((rounds, encryption_quality(img, cipher)))
    return out


# --- key sensitivity ---------------------------------------------------------

@dataclass(frozen=True)
class KeySensitivityReport:
    percent_differing: float          # pixels differing between the two cipherimages
    difference_image: GrayImage
    wrong_key_decrypt_percent: float  # pixels still wrong after decrypting with the other key

    def to_json_dict(self) -> dict:
        return {
            "percent_differing": self.percent_differing,
            "wrong_key_decrypt_percent": self.wrong_key_decrypt_percent,
        }


def difference_image(a: GrayImage, b: GrayImage, mode: str = "abs") -> GrayImage:
    """Pixel-wise |a - b| (default) or a XOR b."""
    a, b = _as_image(a), _as_image(b)
    if a.shape != b.shape:
        raise SizeMismatch(f"images differ in size: {a.shape} vs {b.shape}")
    if mode == "abs":
        return np.abs(a.astype(np.int16) - b.astype(np.int16)).astype(np.uint8)
    if mode == "xor":
        return a ^ b
    raise ValueError(f"mode must be 'abs' or 'xor', got {mode!r}")


def key_sensitivity(img: GrayImage, k1: bytes, k2: bytes, variant: Variant = Variant.ORIGINAL,
                    rounds: int = 16, diff_mode: str = "abs") -> KeySensitivityReport:
    """Compare encryptions of one image under two keys.

    percent_differing counts pixels where the two cipherimages disagree;
    wrong_key_decrypt_percent counts pixels still wrong after decrypting
    the k1 cipherimage with k2 (an ideal cipher gives ~99.61% for both).
    """
    img = _as_image(img)
    c1 = encrypt_image_ecb(img, EcbConfig(key=k1, variant=variant, rounds=rounds))
    c2 = encrypt_image_ecb(img, EcbConfig(key=k2, variant=variant, rounds=rounds))
    wrong = decrypt_image_ecb(c1, EcbConfig(key=k2, variant=variant, rounds=rounds))
    return KeySensitivityReport(
        percent_differing=100.0 * np.count_nonzero(c1 != c2) / img.size,
        difference_image=difference_image(c1, c2, diff_mode),
        wrong_key_decrypt_percent=100.0 * np.count_nonzero(wrong != img) / img.size,
    )


# --- histogram uniformity ----------------------------------------------------

@dataclass(frozen=True)
class UniformityReport:
    chi_square: float
    p_value: float
    max_bin_percent: float
    min_bin_percent: float

    def to_json_dict(self) -> dict:
        return {
            "chi_square": self.chi_square,
            "p_value": self.p_value,
            "max_bin_percent": self.max_bin_percent,
            "min_bin_percent": self.min_bin_percent,
        }


def histogram_uniformity(bins: np.ndarray) -> UniformityReport:
    """Chi-square goodness of fit against a flat 256-bin histogram.

    255 degrees of freedom; the p-value is the upper tail via the
    regularized incomplete gamma function.
    """
    bins = np.asarray(bins, dtype=np.int64)
    total = int(bins.sum())
    if total <= 0:
        raise EmptyHistogram("histogram has no counts")
    expected = total / 256.0
    chi2 = float(((bins - expected) ** 2 / expected).sum())
    p = float(special.gammaincc(255 / 2.0, chi2 / 2.0))
    return UniformityReport(
        chi_square=chi2,
        p_value=p,
        max_bin_percent=100.0 * int(bins.max()) / total,
        min_bin_percent=100.0 * int(bins.min()) / total,
    )


# --- adjacent-pixel correlation ----------------------------------------------

@dataclass(frozen=True)
class CorrelationSample:
    """Grey values of n adjacent pixel pairs, x alongside its neighbour y."""

    x: np.ndarray
    y: np.ndarray

    def __len__(self):
        return len(self.x)


def sample_adjacent_pairs(img: GrayImage, n: int = 1200, seed: int = 0,
                          direction: str = "horizontal") -> CorrelationSample:
    """Randomly select n adjacent pixel pairs (with replacement)."""
    img = _as_image(img)
    h, w = img.shape
    if n < 2:
        raise ValueError(f"need at least 2 pairs, got {n}")
    if direction == "horizontal":
        if w < 2:
            raise ValueError("horizontal pairs need width >= 2")
        positions, cols = (w - 1) * h, w - 1
    elif direction == "vertical":
        if h < 2:
            raise ValueError("vertical pairs need height >= 2")
        positions, cols = (h - 1) * w, w
    else:
        raise ValueError(f"direction must be 'horizontal' or 'vertical', got {direction!r}")
    idx = np.empty(n, dtype=np.int64)
    s = derive_stream(seed, 0)
    for i in range(n):
        idx[i], s = rand_below(s, positions)
    ys, xs = idx // cols, idx % cols
    if direction == "horizontal":
        return CorrelationSample(x=img[ys, xs].copy(), y=img[ys, xs + 1].copy())
    return CorrelationSample(x=img[ys, xs].copy(), y=img[ys + 1, xs].copy())


def correlation_coefficient(sample: CorrelationSample) -> float:
    """r = cov(x,y) / sqrt(D(x) D(y)), population moments with divisor N."""
    x = np.asarray(sample.x, dtype=np.float64)
    y = np.asarray(sample.y, dtype=np.float64)
    ex, ey = x.mean(), y.mean()
    dx = ((x - ex) ** 2).mean()
    dy = ((y - ey) ** 2).mean()
    if dx == 0.0 or dy == 0.0:
        raise DegenerateVariance("a series of identical grey values has no defined correlation")
    cov = ((x - ex) * (y - ey)).mean()
    return float(cov / (np.sqrt(dx) * np.sqrt(dy)))


# --- report serialization ----------------------------------------------------

def to_json(obj, indent: int = 2) -> str:
    """Serialize a report (or list of reports) with stable field order."""
    def convert(o):
        if hasattr(o, "to_json_dict"):
            return o.to_json_dict()
        if isinstance(o, (list, tuple)):
            return [convert(v) for v in o]
        return o
    return json.dumps(convert(obj), indent=indent) + "\n"


def rows_to_csv(rows: List[dict]) -> str:
    """CSV with a header row taken from the first row's keys."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
