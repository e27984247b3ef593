#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Plot union-bound block-error curves produced by `mixedpolar curve`.

Usage: plot_curves.py curves.csv [out.png]
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    df = pd.read_csv(sys.argv[1], comment="#")
    fig, ax = plt.subplots(figsize=(7, 5))
    for scheme, grp in df.groupby("scheme"):
        grp = grp.sort_values("rate")
        ax.semilogy(grp["rate"], grp["bound"].clip(lower=1e-16), marker="o", label=scheme)
    n_bits = int(df["N"].iloc[0])
    eps = df["epsilon"].iloc[0]
    ax.set_xlabel("rate")
    ax.set_ylabel("union bound on block error probability")
    ax.set_title(f"SC block error bounds, N = {n_bits} bits, BEC({eps})")
    ax.set_ylim(1e-16, 10)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    out = sys.argv[2] if len(sys.argv) > 2 else "curves.png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
