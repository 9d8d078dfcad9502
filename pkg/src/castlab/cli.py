"""Command-line entry point.

Subcommands: encrypt, decrypt, avalanche, quality, keysens, histogram,
correlate, bench, plot, selftest.  Exit codes: 0 success, 1 runtime
failure (I/O, size, degenerate input; the error class name goes to
stderr), 2 usage error (bad flag, malformed key, missing input file).

The --seed flag falls back to the CASTLAB_SEED environment variable,
then 0.  Identical seeds give byte-identical reports.
"""

import argparse
import csv
import os
import sys

import numpy as np

from . import analysis, bench, image_io, modes, plots
from .core import (Block64, Variant, decrypt_block, encrypt_block, key_from_hex,
                   key_schedule, rotl32)
from .errors import CastLabError, InvalidKeyLength
from .rng import RngState, derive_stream, next_u64, rand_below, rand_bytes

# one-bit-different 128-bit demo keys used by the key-sensitivity workflow
DEFAULT_KEY1 = "ADF278565E262AD1F5DEC94A0BF25B27"
DEFAULT_KEY2 = "ADF238565E262AD1F5DEC94A0BF25B27"

IMAGE_EXTENSIONS = (".pgm", ".bmp")


class UsageError(Exception):
    pass


def _parse_key(text: str) -> bytes:
    try:
        return key_from_hex(text)
    except (InvalidKeyLength, ValueError) as e:
        raise UsageError(f"bad key {text!r}: {e}") from e


def _require_file(path: str) -> str:
    if not os.path.isfile(path):
        raise UsageError(f"input file not found: {path}")
    return path


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    try:
        return int(os.environ.get("CASTLAB_SEED", "0"))
    except ValueError:
        raise UsageError("CASTLAB_SEED must be an integer") from None


def _parse_rounds_list(text: str):
    """Accept e.g. '16', '2,4,8', '2-16', '2..16', or combinations."""
    rounds = []
    for part in text.split(","):
        part = part.strip()
        sep = ".." if ".." in part else ("-" if "-" in part else None)
        try:
            if sep:
                lo, hi = part.split(sep, 1)
                rounds.extend(range(int(lo), int(hi) + 1))
            else:
                rounds.append(int(part))
        except ValueError:
            raise UsageError(f"bad rounds list {text!r}") from None
    if not rounds or not all(1 <= r <= 16 for r in rounds):
        raise UsageError(f"rounds must all be in [1, 16], got {text!r}")
    return rounds


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _is_image_path(path: str) -> bool:
    return str(path).lower().endswith(IMAGE_EXTENSIONS)


# --- encrypt / decrypt -------------------------------------------------------

def _cmd_crypt(args, decrypt: bool) -> int:
    cfg = modes.EcbConfig(key=_parse_key(args.key),
                          variant=Variant.from_name(args.variant),
                          rounds=args.rounds)
    _require_file(args.infile)
    image_mode = not args.bytes and _is_image_path(args.infile)
    if image_mode:
        img = image_io.load_image(args.infile)
        out = modes.decrypt_image_ecb(img, cfg) if decrypt else modes.encrypt_image_ecb(img, cfg)
        image_io.save_image(out, args.outfile)
    else:
        with open(args.infile, "rb") as f:
            data = f.read()
        out = modes.decrypt_bytes_ecb(data, cfg) if decrypt else modes.encrypt_bytes_ecb(data, cfg)
        with open(args.outfile, "wb") as f:
            f.write(out)
    return 0


# --- experiments -------------------------------------------------------------

def _cmd_avalanche(args) -> int:
    mode = {"plaintext": "plaintext_flip", "key": "key_flip"}[args.mode]
    comparator = {"closer32": "closer_to_32", "greater": "greater"}[args.comparator]
    key = _parse_key(args.key)
    seed = _resolve_seed(args)
    tables = [analysis.avalanche_experiment(analysis.AvalancheConfig(
        mode=mode, samples=args.samples, rounds=r, master_key=key, seed=seed,
        comparator=comparator, fixed_key_bit=args.fixed_key_bit, workers=args.workers,
    )) for r in _parse_rounds_list(args.rounds)]
    if args.format == "csv":
        _emit(analysis.rows_to_csv([t.to_json_dict() for t in tables]), args.out)
    else:
        _emit(analysis.to_json(tables), args.out)
    return 0


def _cmd_quality(args) -> int:
    if args.sweep:
        if not args.infile or not args.key:
            raise UsageError("--sweep requires --in and --key")
        img = image_io.load_image(_require_file(args.infile))
        key = _parse_key(args.key)
        variants = list(Variant) if args.variant == "both" else [Variant.from_name(args.variant)]
        rows = []
        for variant in variants:
            for rounds, eq in analysis.eq_vs_rounds(img, key, variant, _parse_rounds_list(args.rounds)):
                rows.append({"variant": variant.value, "rounds": rounds, "eq": eq})
        _emit(analysis.rows_to_csv(rows) if args.format == "csv" else
              analysis.to_json(rows), args.out)
        return 0
    if not args.plain or not args.cipher:
        raise UsageError("quality needs --plain and --cipher (or --sweep)")
    eq = analysis.encryption_quality(image_io.load_image(_require_file(args.plain)),
                                     image_io.load_image(_require_file(args.cipher)))
    _emit(analysis.to_json({"eq": eq}), args.out)
    return 0


def _cmd_keysens(args) -> int:
    img = image_io.load_image(_require_file(args.infile))
    k1, k2 = _parse_key(args.key1), _parse_key(args.key2)
    variant = Variant.from_name(args.variant)
    report = analysis.key_sensitivity(img, k1, k2, variant, args.rounds, args.diff_mode)
    if args.out_prefix:
        cfg1 = modes.EcbConfig(key=k1, variant=variant, rounds=args.rounds)
        cfg2 = modes.EcbConfig(key=k2, variant=variant, rounds=args.rounds)
        c1 = modes.encrypt_image_ecb(img, cfg1)
        image_io.save_image(c1, args.out_prefix + "_cipher_k1.pgm")
        image_io.save_image(modes.encrypt_image_ecb(img, cfg2), args.out_prefix + "_cipher_k2.pgm")
        image_io.save_image(report.difference_image, args.out_prefix + "_diff.pgm")
        image_io.save_image(modes.decrypt_image_ecb(c1, cfg2), args.out_prefix + "_wrongkey.pgm")
    _emit(analysis.to_json(report), args.out)
    return 0


def _cmd_histogram(args) -> int:
    img = image_io.load_image(_require_file(args.infile))
    bins = image_io.histogram(img)
    if args.csv:
        rows = [{"level": level, "count": int(count)} for level, count in enumerate(bins)]
        with open(args.csv, "w", encoding="utf-8", newline="\n") as f:
            f.write(analysis.rows_to_csv(rows))
    if args.svg:
        plots.plot_histogram_svg(bins, args.svg, title=args.title)
    _emit(analysis.to_json(analysis.histogram_uniformity(bins)), args.out)
    return 0


def _cmd_correlate(args) -> int:
    img = image_io.load_image(_require_file(args.infile))
    sample = analysis.sample_adjacent_pairs(img, n=args.pairs, seed=_resolve_seed(args),
                                            direction=args.direction)
    r = analysis.correlation_coefficient(sample)
    if args.svg:
        plots.plot_scatter_svg(sample, args.svg, title=args.title)
    _emit(analysis.to_json({"pairs": args.pairs, "direction": args.direction,
                            "correlation": r}), args.out)
    return 0


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    if args.op == "round":
        report = bench.compare_round_functions(iterations=args.iters, seed=seed,
                                               repeats=args.repeats)
    else:
        report = {v.value: bench.bench_block_encrypt(v, megabytes=args.mb, rounds=args.rounds,
                                                     seed=seed, repeats=args.repeats).to_json_dict()
                  for v in Variant}
    _emit(analysis.to_json(report), args.out)
    return 0


def _cmd_plot(args) -> int:
    with open(_require_file(args.infile), "r", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise UsageError(f"{args.infile}: empty CSV")
    try:
        if args.kind == "histogram":
            bins = np.zeros(256, dtype=np.int64)
            for row in rows:
                level = int(row["level"])
                if not 0 <= level <= 255:
                    raise ValueError(f"grey level {level} out of range")
                bins[level] = int(row["count"])
            plots.plot_histogram_svg(bins, args.out, title=args.title)
        else:
            xs = [int(r["x"]) for r in rows]
            ys = [int(r["y"]) for r in rows]
            if not all(0 <= v <= 255 for v in xs + ys):
                raise ValueError("grey values out of range")
            sample = analysis.CorrelationSample(x=np.array(xs, dtype=np.uint8),
                                                y=np.array(ys, dtype=np.uint8))
            plots.plot_scatter_svg(sample, args.out, title=args.title)
    except (KeyError, ValueError) as e:
        raise UsageError(f"{args.infile}: not a usable {args.kind} CSV ({e})") from None
    return 0


# --- selftest ------------------------------------------------------------------

def _cmd_selftest(args) -> int:
    failures = 0

    def check(name, fn):
        nonlocal failures
        try:
            fn()
            print(f"ok   {name}")
        except Exception as e:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}: {type(e).__name__}: {e}")

    def known_answers():
        vectors = [
            ("0123456712345678234567893456789A", 16, "238B4FE5847E44B2"),
            ("01234567123456782345", 12, "EB6A711A2C02271B"),
            ("0123456712", 12, "7AC816D16E9B302E"),
        ]
        pt = Block64.from_hex("0123456789ABCDEF")
        for key_hex, rounds, want in vectors:
            keys = key_schedule(key_from_hex(key_hex))
            ct = encrypt_block(pt, keys, Variant.ORIGINAL, rounds)
            assert ct.to_hex() == want, f"{key_hex}: got {ct.to_hex()}, want {want}"
            assert decrypt_block(ct, keys, Variant.ORIGINAL, rounds) == pt

    def splitmix_reference():
        value, _ = next_u64(RngState(0))
        assert value == 0xE220A8397B1DCDAF, hex(value)

    def roundtrips():
        s = derive_stream(0, 99)
        for trial in range(200):
            kb, s = rand_below(s, 12)
            key_bytes = bytearray()
            for _ in range(kb + 5):
                b, s = rand_below(s, 256)
                key_bytes.append(b)
            keys = key_schedule(bytes(key_bytes))
            assert all(0 <= r <= 31 for r in keys.kr)
            v, s = next_u64(s)
            block = Block64(v >> 32, v & 0xFFFFFFFF)
            rounds = trial % 16 + 1
            for variant in Variant:
                assert decrypt_block(encrypt_block(block, keys, variant, rounds),
                                     keys, variant, rounds) == block

    def type1_identity():
        from .sboxes import S4
        from .core import MASK32, round_function
        s = derive_stream(0, 100)
        for _ in range(500):
            km, s = next_u64(s)
            kr, s = rand_below(s, 32)
            rp, s = next_u64(s)
            km, rp = km & MASK32, rp & MASK32
            fo = round_function(1, Variant.ORIGINAL, km, kr, rp)
            fm = round_function(1, Variant.MODIFIED, km, kr, rp)
            i = rotl32((km + rp) & MASK32, kr)
            assert fm == (fo - 2 * S4[i & 0xFF]) % 2**32

    def bulk_matches_scalar():
        from .core import encrypt_words
        keys = key_schedule(key_from_hex(DEFAULT_KEY1))
        s = derive_stream(0, 101)
        vals = []
        for _ in range(64):
            v, s = next_u64(s)
            vals.append(v)
        l = np.array([v >> 32 for v in vals], dtype=np.uint32)
        r = np.array([v & 0xFFFFFFFF for v in vals], dtype=np.uint32)
        for variant in Variant:
            cl, cr = encrypt_words(l, r, keys.km, keys.kr, variant, 16)
            for j, v in enumerate(vals):
                ct = encrypt_block(Block64(v >> 32, v & 0xFFFFFFFF), keys, variant, 16)
                assert (ct.left, ct.right) == (int(cl[j]), int(cr[j]))

    def padding_roundtrip():
        cfg = modes.EcbConfig(key=key_from_hex(DEFAULT_KEY1))
        s = derive_stream(0, 102)
        for length in range(0, 33):
            data, s = rand_bytes(s, length)
            assert modes.decrypt_bytes_ecb(modes.encrypt_bytes_ecb(data, cfg), cfg) == data
            assert len(modes.encrypt_bytes_ecb(data, cfg)) == (length // 8 + 1) * 8

    check("rfc2144 known-answer vectors", known_answers)
    check("splitmix64 reference output", splitmix_reference)
    check("encrypt/decrypt roundtrips", roundtrips)
    check("type-1 cross-variant identity", type1_identity)
    check("bulk path matches scalar", bulk_matches_scalar)
    check("pkcs7 byte-mode roundtrip", padding_roundtrip)
    print("selftest:", "PASS" if failures == 0 else f"{failures} FAILURE(S)")
    return 0 if failures == 0 else 1


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="castlab",
        description="CAST-128 (original and modified round function) encryption "
                    "and image-security analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: $CASTLAB_SEED or 0)")

    def add_out(p):
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    def add_format(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")

    for name, decrypt in (("encrypt", False), ("decrypt", True)):
        p = sub.add_parser(name, help=f"{name} an image (.pgm/.bmp) or raw bytes in ECB mode")
        p.add_argument("--key", required=True, help="hex key, 10-32 digits")
        p.add_argument("--variant", choices=("original", "modified"), default="original")
        p.add_argument("--rounds", type=int, default=16)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--out", dest="outfile", required=True)
        p.add_argument("--bytes", action="store_true",
                       help="treat the input as raw bytes even if it looks like an image")
        p.set_defaults(func=lambda a, d=decrypt: _cmd_crypt(a, d))

    p = sub.add_parser("avalanche", help="single-bit-flip avalanche comparison of both variants")
    p.add_argument("--mode", choices=("plaintext", "key"), default="plaintext")
    p.add_argument("--samples", type=int, default=60000)
    p.add_argument("--rounds", default="2,4,6,8,10,12,14,16",
                   help="rounds list, e.g. '16' or '2,4,8' or '2-16'")
    p.add_argument("--comparator", choices=("closer32", "greater"), default="closer32")
    p.add_argument("--key", default=DEFAULT_KEY1, help="hex master key")
    p.add_argument("--fixed-key-bit", type=int, default=None,
                   help="key mode: always flip this bit instead of a random one")
    p.add_argument("--workers", type=int, default=1)
    add_seed(p), add_format(p), add_out(p)
    p.set_defaults(func=_cmd_avalanche)

    p = sub.add_parser("quality", help="encryption quality (mean histogram deviation)")
    p.add_argument("--plain", default=None)
    p.add_argument("--cipher", default=None)
    p.add_argument("--sweep", action="store_true", help="EQ as a function of rounds")
    p.add_argument("--in", dest="infile", default=None, help="plainimage for --sweep")
    p.add_argument("--key", default=None, help="hex key for --sweep")
    p.add_argument("--rounds", default="2-16")
    p.add_argument("--variant", choices=("original", "modified", "both"), default="both")
    add_format(p), add_out(p)
    p.set_defaults(func=_cmd_quality)

    p = sub.add_parser("keysens", help="one-bit key change: cipherimage difference and "
                                       "wrong-key decryption")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--key1", default=DEFAULT_KEY1)
    p.add_argument("--key2", default=DEFAULT_KEY2)
    p.add_argument("--variant", choices=("original", "modified"), default="original")
    p.add_argument("--rounds", type=int, default=16)
    p.add_argument("--diff-mode", choices=("abs", "xor"), default="abs")
    p.add_argument("--out-prefix", default=None,
                   help="also write <prefix>_cipher_k1/_cipher_k2/_diff/_wrongkey.pgm")
    add_out(p)
    p.set_defaults(func=_cmd_keysens)

    p = sub.add_parser("histogram", help="grey-level histogram, uniformity test, chart")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--csv", default=None, help="write 256-bin CSV here")
    p.add_argument("--svg", default=None, help="write bar chart here")
    p.add_argument("--title", default="Grey-level histogram")
    add_out(p)
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("correlate", help="adjacent-pixel correlation coefficient")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--pairs", type=int, default=1200)
    p.add_argument("--direction", choices=("horizontal", "vertical"), default="horizontal")
    p.add_argument("--svg", default=None, help="write scatter chart here")
    p.add_argument("--title", default="Adjacent-pixel correlation")
    add_seed(p), add_out(p)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("bench", help="time the round-function variants or bulk encryption")
    p.add_argument("--op", choices=("round", "block"), default="round")
    p.add_argument("--iters", type=int, default=100000, help="round-function chain length")
    p.add_argument("--mb", type=int, default=2, help="megabytes for --op block")
    p.add_argument("--rounds", type=int, default=16)
    p.add_argument("--repeats", type=int, default=3)
    add_seed(p), add_out(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("plot", help="render a previously emitted CSV as SVG")
    p.add_argument("--kind", choices=("histogram", "scatter"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="castlab chart")
    p.set_defaults(func=_cmd_plot)

    p = sub.add_parser("selftest", help="known-answer vectors and invariant checks")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"usage error: input file not found: {e.filename}", file=sys.stderr)
        return 2
    except ValueError as e:
        # argument-validation failures raised below the CLI layer
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except CastLabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: IoError: {e}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
