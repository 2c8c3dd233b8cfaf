"""
Meshing tube surfaces
=====================

Sample the boundary of the section along the axis and stitch neighbouring
rings into triangles. Output is a Wavefront OBJ file.
"""

import math
import tempfile
from pathlib import Path

from frenet_rn import CurveSpec, make_jet
from frenet_rn.tube import Disk, TubeSpec
from frenet_rn.tube.helix import helix_tube
from frenet_rn.tube.mesh import tube_mesh

axis = make_jet(CurveSpec.embedded(CurveSpec.circle(3.0), 3))
torus = TubeSpec(axis, (0.0, 2 * math.pi), Disk(1.0))

# %%
for res in (16, 64, 128):
    mesh = tube_mesh(torus, (res, res))
    err = mesh.area() / (4 * math.pi**2 * 3) - 1
    print(f"{res:4d}: chi={mesh.euler_characteristic()} loops={mesh.boundary_loops()} area err={err:+.3%}")

# %%
# An open axis leaves two boundary circles.
helix = tube_mesh(helix_tube(1.0), (48, 96))
print("helix tube: chi", helix.euler_characteristic(), "loops", helix.boundary_loops())

out = Path(tempfile.gettempdir()) / "torus.obj"
out.write_text(tube_mesh(torus, (48, 48)).to_obj())
print("wrote", out)
