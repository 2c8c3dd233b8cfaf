"""
Tube volumes around the helix
=============================

Four tubes around (cos t, sin t, t) on [0, 2 pi], each by nested quadrature
and by its closed form: a disk, a region bounded by parabolas carried by its
barycenter, the same region carried by the point (1/2, 0), and disks of
radius 1 + sin(t)/2.
"""

import math

from frenet_rn import CurveSpec, make_jet
from frenet_rn.tube import (Disk, DiskFamily, ParabolicRegion, TubeSpec, disk_tube_volume, pappus_volume,
                            tube_volume, tube_volume_closed_form)

helix = make_jet(CurveSpec.helix())
I = (0.0, 2 * math.pi)
S = ParabolicRegion()  # |x| <= 1, |y| <= x^2/4 + 1

cases = [
    ("disk(2)", TubeSpec(helix, I, Disk(2.0)), pappus_volume(Disk(2.0), helix, I)),
    ("S at barycenter", TubeSpec(helix, I, S), pappus_volume(S, helix, I)),
    ("S at (1/2, 0)", TubeSpec(helix, I, S, attach=(0.5, 0.0)), None),
    ("disk(1 + sin t/2)", TubeSpec(helix, I, DiskFamily(lambda t: 1 + math.sin(t) / 2)),
     disk_tube_volume(lambda t: 1 + math.sin(t) / 2, helix, I).value),
]

# %%
for name, spec, closed in cases:
    if closed is None:
        closed = tube_volume_closed_form(spec)
    print(f"{name:18s} quadrature {tube_volume(spec):.12f}   closed form {closed:.12f}")

# %%
# The torus of radii 1 and 3 as a tube around a circle.
axis = make_jet(CurveSpec.embedded(CurveSpec.circle(3.0), 3))
torus = TubeSpec(axis, I, Disk(1.0))
print("torus", tube_volume(torus), 2 * math.pi**2 * 3)
