"""Plot capacity curves from a `cpa-gmac` CSV.

    python scripts/plot_curves.py fig1.csv fig1.png

One line per (scheme, constellation, p2_ratio). Rows without a capacity
(pure metric searches) are skipped.
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main(src, dst):
    df = pd.read_csv(src).dropna(subset=["capacity_bits"])
    fig, ax = plt.subplots(figsize=(6, 4))
    for (scheme, label, ratio), g in df.groupby(["scheme", "constellation", "p2_ratio"]):
        g = g.sort_values("snr_db")
        name = f"{label} {scheme}" + ("" if ratio == 1 else f" P2/P1={ratio:g}")
        ax.plot(g["snr_db"], g["capacity_bits"], marker="o", ms=3, label=name)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("sum capacity (bits/channel use)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: plot_curves.py IN.csv OUT.png")
    main(sys.argv[1], sys.argv[2])
