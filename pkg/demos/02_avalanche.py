#!/usr/bin/env python3
"""Avalanche comparison of the original and modified variants.

Flips one plaintext bit (or one key bit) per trial, encrypts with both
variants, and counts which one lands closer to the ideal 32-of-64 changed
bits.  Ties happen whenever both distances are equally far from 32; for
an ideal cipher that folded-binomial collision rate is ~13.1%, which is
what a healthy cipher should show.
"""

from castlab import AvalancheConfig, avalanche_experiment, key_from_hex

KEY = key_from_hex("ADF278565E262AD1F5DEC94A0BF25B27")
SAMPLES = 20000  # the full-scale experiment uses 60000; scale for a quick demo

for mode, label in (("plaintext_flip", "one bit change in plaintext"),
                    ("key_flip", "one bit change in key")):
    print("=" * 72)
    print(f"Avalanche, {label}, {SAMPLES} sample pairs")
    print("=" * 72)
    print(f"{'rounds':>6} {'orig better':>12} {'mod better':>11} {'same':>6} "
          f"{'mean dist o/m':>16} {'sd o/m':>12}")
    for rounds in (2, 4, 6, 8, 10, 12, 14, 16):
        tab = avalanche_experiment(AvalancheConfig(
            mode=mode, samples=SAMPLES, rounds=rounds, master_key=KEY, seed=0))
        print(f"{tab.rounds:>6} {tab.wins_original:>12} {tab.wins_modified:>11} "
              f"{tab.ties:>6} {tab.mean_distance_original:>8.3f}/{tab.mean_distance_modified:<7.3f} "
              f"{tab.sd_distance_original:>5.2f}/{tab.sd_distance_modified:<5.2f}")
    print()

print("Reading the table: neither variant should win systematically, the")
print("tie column should sit near 13.1%, and from ~4 rounds on the mean")
print("distance should hover at 32 bits with sd ~4 - which is exactly the")
print("Binomial(64, 1/2) behaviour an ideal cipher would produce.")
