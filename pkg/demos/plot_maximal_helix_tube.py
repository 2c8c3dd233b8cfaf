"""
How thick can a tube around the helix be?
=========================================

The helix has kappa = 1/2, so disks up to radius 2 keep the Jacobian of the
tube map positive. Radius 2 is also the largest for which the tube map is
one-to-one; past it, explicit pairs of section points collide.
"""

import math

import numpy as np

from frenet_rn.tube.helix import HelixOverlap, boundary_root, helix_collision_witness, helix_overlap_g, helix_tube
from frenet_rn.tube.scan import injectivity_scan

# %%
# g(s) = s - r sin T + r sin(s + T) decides whether the point at angle T on
# the ellipse of scale r meets the section at t + s.
s = np.linspace(0, math.pi, 9)
for r, T in [(0.8, 2.5), (1.5, math.pi)]:
    print(f"r={r} T={T:.3f}", np.round(helix_overlap_g(HelixOverlap(r, T), s), 4))
print("root of s - 1.5 sin s:", boundary_root(1.5))

# %%
for R in (2.0001, 2.5, 3.0):
    w = helix_collision_witness(R)
    (x1, t1), (x2, t2) = w.P1, w.P2
    print(f"R={R}: {x1} at t={t1:.3f} and {np.round(x2, 4)} at t={t2:.4f} -> "
          f"{np.round(w.image, 4)} (residual {w.residual:.1e})")

# %%
# A grid scan sees the same thing: nothing at radius 2, collisions at 2.5.
for R in (2.0, 2.5):
    rep = injectivity_scan(helix_tube(R), resolution=64)
    print(f"radius {R}: clean={rep.clean}, reported pairs={len(rep.pairs)}")
    if rep.pairs:
        a, b, d = rep.pairs[0]
        print("  closest:", np.round(a, 3), np.round(b, 3), f"{d:.2e}")
