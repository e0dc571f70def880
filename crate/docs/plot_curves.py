"""Plot cost curves written by `latticebdd cost curve --out FILE`.

    python docs/plot_curves.py caps.csv minfind.csv -o curves.png
"""
import argparse
import csv
from pathlib import Path

import matplotlib.pyplot as plt


def read_curve(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return [float(r["b"]) for r in rows], [float(r["c"]) for r in rows]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+", type=Path)
    ap.add_argument("-o", "--output", type=Path, default=Path("curves.png"))
    args = ap.parse_args()
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in args.csv:
        b, c = read_curve(path)
        ax.plot(b, c, label=path.stem)
    ax.set_xlabel("memory exponent b")
    ax.set_ylabel("time exponent c")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
