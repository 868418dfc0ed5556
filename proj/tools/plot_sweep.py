#!/usr/bin/env python3
"""Plot the error curves written by `rbfmix sweep` (log-log, against N + M)."""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    data = np.loadtxt(path, ndmin=2)
    return data[:, 0], data[:, 1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sweep_dir", type=Path)
    ap.add_argument("-o", "--output", type=Path, help="image file (default: <sweep_dir>/errors.png)")
    ap.add_argument("--title", default=None)
    args = ap.parse_args()

    curves = [
        ("h1_error.dat", r"$\|u-u_X\|_{H^1(\Omega)}$", "o-"),
        ("l2_lambda_error.dat", r"$\|\lambda-\lambda_k\|_{L_2(\Gamma)}$", "s-"),
        ("ref_h.dat", r"$10\,h$", "k--"),
        ("ref_k_half.dat", r"$10\,k^{1/2}$", "k:"),
    ]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, label, style in curves:
        x, y = load(args.sweep_dir / name)
        ax.loglog(x, y, style, label=label)
    ax.set_xlabel("number of unknowns N + M")
    ax.set_ylabel("error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if args.title:
        ax.set_title(args.title)
    out = args.output or args.sweep_dir / "errors.png"
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
