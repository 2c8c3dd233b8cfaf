"""
Frenet apparatus of a curve in R^4
==================================

The moment curve f(t) = (t, t^2, t^3, t^4) is 3-regular everywhere, so it has
a speed, three curvatures and a positively oriented frame at every t.
"""

import numpy as np

from frenet_rn import CurveSpec, apparatus, make_jet
from frenet_rn.frenet import curvatures_chain

# coefficients are listed lowest degree first, one row per coordinate
jet = make_jet(CurveSpec.polynomial([[0, 1], [0, 0, 1], [0, 0, 0, 1], [0, 0, 0, 0, 1]]))

# %%
# At the origin the derivatives are multiples of e_1..e_4, so the frame is
# the canonical basis.
app = apparatus(jet(0.0))
print("nu     =", app.nu)
print("kappas =", app.kappas)
print("frame  =\n", app.frame)

# %%
# Along the curve, compare the wedge-norm ratios with the recursive chain
# and with the closed form of the first curvature.
ts = np.linspace(-1.5, 1.5, 7)
for t in ts:
    k = apparatus(jet(t)).kappas
    p = 1 + 4 * t**2 + 9 * t**4 + 16 * t**6
    q = 1 + 9 * t**2 + 45 * t**4 + 64 * t**6 + 36 * t**8
    k1 = 2 * np.sqrt(q) / p**1.5
    gap = np.max(np.abs(k - curvatures_chain(jet(t))))
    print(f"t={t:+.2f}  kappa={np.round(k, 6)}  closed-form kappa1 err={abs(k[0] - k1):.1e}  chain gap={gap:.1e}")

# %%
# The curvatures peak at the origin and decay like powers of 1/t.
grid = np.linspace(-3, 3, 601)
profile = np.array([apparatus(jet(t)).kappas for t in grid])
print("argmax per curvature:", grid[profile.argmax(axis=0)])
