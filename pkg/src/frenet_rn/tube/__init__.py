"""Tubes around curves: volumes, sphere-tube areas, overlap diagnostics and meshes."""
from .core import (DiskTubeVolume, TubeSpec, check_regularity, curvature_integral,
                   disk_tube_volume, pappus_volume, regularity_radius, section_moments,
                   tube_jacobian, tube_map, tube_volume, tube_volume_closed_form)
from .sections import (CrossSection, Disk, DiskFamily, ImplicitSection, ParabolicRegion,
                       Polygon, barycenter, section_volume, sphere_volume, unit_ball_volume)
from .sphere import sphere_tube_area, sphere_tube_gauss_map, sphere_tube_pappus, sphere_tube_point
