"""TW1 CDF from the Hastings-McLeod solution of Painleve II.

q'' = s q + 2 q^3, q(s) ~ Ai(s) as s -> inf. Integrate backward from a large
s0, accumulating I1 = int_s^s0 q and I2 = int_s^s0 (x - s) q^2 via
I2' = -int_s^s0 q^2 =: -J, J' = -q^2.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import airy


def tw1_cdf_painleve(s_values, s0=8.0):
    s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
    ai, aip, _, _ = airy(s0)

    def rhs(x, y):
        q, dq, _i1, _i2, j = y
        return [dq, x * q + 2 * q**3, -q, -j, -(q**2)]

    lo = min(s_values.min(), s0 - 1.0)
    sol = solve_ivp(rhs, (s0, lo), [ai, aip, 0.0, 0.0, 0.0], method="DOP853",
                    rtol=1e-13, atol=1e-16, dense_output=True)
    out = np.empty_like(s_values)
    for k, s in enumerate(s_values):
        if s >= s0:
            out[k] = 1.0
            continue
        q, dq, i1, i2, j = sol.sol(s)
        # I2 as built equals int_s^s0 (x - s) q^2 dx
        out[k] = np.exp(-0.5 * i1 - 0.5 * i2)
    return out
