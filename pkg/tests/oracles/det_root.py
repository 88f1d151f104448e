"""Largest root of det(B - lam W) = 0 by scanning for a sign change and bisecting."""

import numpy as np


def largest_det_root(w, b, grid=20000, tol=1e-13):
    p = w.shape[0]
    # Rayleigh-quotient bound: lam_max <= trace(B) / smallest diagonal-dominance proxy of W
    hi = (np.trace(b) + 1.0) / np.linalg.eigvalsh(w)[0] * 1.01
    sign_top = (-1) ** p

    def f(lam):
        return np.linalg.det(b - lam * w)

    xs = np.linspace(hi, 0.0, grid)
    prev = xs[0]
    for x in xs[1:]:
        if np.sign(f(x)) != sign_top:
            lo, up = x, prev
            break
        prev = x
    else:
        return 0.0
    while up - lo > tol * max(1.0, up):
        mid = 0.5 * (lo + up)
        if np.sign(f(mid)) == sign_top:
            up = mid
        else:
            lo = mid
    return 0.5 * (lo + up)
