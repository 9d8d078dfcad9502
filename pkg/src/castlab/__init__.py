"""castlab: CAST-128 (plus a modified round-function variant) and the
statistical battery used to judge it on images: avalanche effect,
encryption quality, key sensitivity, histogram uniformity, and
adjacent-pixel correlation."""

from .analysis import (AvalancheConfig, AvalancheTable, Comparison,
                       CorrelationSample, KeySensitivityReport,
                       UniformityReport, avalanche_compare,
                       avalanche_experiment, correlation_coefficient,
                       difference_image, encryption_quality, eq_vs_rounds,
                       hamming64, histogram_uniformity, key_sensitivity,
                       sample_adjacent_pairs)
from .bench import (BenchComparison, BenchReport, bench_block_encrypt,
                    bench_round_function, compare_round_functions)
from .core import (Block64, RoundKeys, Variant, decrypt_block, decrypt_words,
                   encrypt_block, encrypt_words, flip_key_bit, key_from_hex,
                   key_schedule, rotl32, round_function)
from .image_io import (GrayImage, histogram, load_image, save_image,
                       synth_image)
from .modes import (EcbConfig, decrypt_bytes_ecb, decrypt_image_ecb,
                    encrypt_bytes_ecb, encrypt_image_ecb)
from .plots import plot_histogram_svg, plot_scatter_svg
from .rng import RngState, derive_stream, next_u64, rand_below, rand_bytes

__version__ = "0.1.0"

__all__ = [
    "AvalancheConfig", "AvalancheTable", "BenchComparison", "BenchReport",
    "Block64", "Comparison", "CorrelationSample", "EcbConfig", "GrayImage",
    "KeySensitivityReport", "RngState", "RoundKeys", "UniformityReport",
    "Variant", "avalanche_compare", "avalanche_experiment",
    "bench_block_encrypt", "bench_round_function", "compare_round_functions",
    "correlation_coefficient", "decrypt_block", "decrypt_bytes_ecb",
    "decrypt_image_ecb", "decrypt_words", "derive_stream", "difference_image",
    "encrypt_block", "encrypt_bytes_ecb", "encrypt_image_ecb", "encrypt_words",
    "encryption_quality", "eq_vs_rounds", "flip_key_bit", "hamming64",
    "histogram", "histogram_uniformity", "key_from_hex", "key_schedule",
    "key_sensitivity", "load_image", "next_u64", "plot_histogram_svg",
    "plot_scatter_svg", "rand_below", "rand_bytes", "rotl32",
    "round_function", "sample_adjacent_pairs", "save_image", "synth_image",
]
