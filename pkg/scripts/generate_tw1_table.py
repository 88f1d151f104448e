"""Regenerate the embedded Tracy-Widom (beta=1) CDF table.

F1(s) is evaluated as the Fredholm determinant det(I - K_s) on L2(0, inf)
with kernel K_s(x, y) = Ai((x + y)/2 + s) / 2, discretised by Gauss-Legendre
quadrature on a truncated interval (Bornemann, Math. Comp. 79, 2010).

    python scripts/generate_tw1_table.py > src/largest_root/data/tw1_table.csv
"""
import sys

import numpy as np
from scipy.special import airy

LO, HI, STEP = -10.0, 6.0, 0.01
NODES = 160


def f1(s, m=NODES):
    length = max(16.0 - s, 8.0)
    x, w = np.polynomial.legendre.leggauss(m)
    x = (x + 1.0) * length / 2.0
    w = w * length / 2.0
    sw = np.sqrt(w)
    kernel = 0.5 * airy((x[:, None] + x[None, :]) / 2.0 + s)[0]
    return np.linalg.det(np.eye(m) - sw[:, None] * kernel * sw[None, :])


def main(out=sys.stdout):
    n = int(round((HI - LO) / STEP)) + 1
    grid = np.round(LO + STEP * np.arange(n), 10)
    values = np.array([f1(s) for s in grid])
    if not (np.all(np.diff(values) > 0) and values[0] > 0 and values[-1] < 1):
        raise SystemExit("generated table is not strictly increasing inside (0, 1)")
    out.write("s,cdf\n")
    for s, v in zip(grid, values):
        out.write(f"{s:.2f},{v:.17g}\n")


if __name__ == "__main__":
    main()
