"""
Curves with constant curvatures
===============================

In R^4 a curve with constant speed and curvatures is congruent to a product
of two circles (r_1 e^{i a_1 t}, r_2 e^{i a_2 t}); in R^5 a line b t is
appended. The angles are read off the normal form of the Frenet matrix.
"""

import math

import numpy as np

from frenet_rn import ConstantCurvatureParams, classify_constant, curvatures, make_jet, realize_constant
from frenet_rn.exterior import d_matrix, d_matrix_det_formula

# %%
nu = math.sqrt(5)
kappas = [math.sqrt(17) / 5, 6 / (5 * math.sqrt(17)), 2 / math.sqrt(17)]
params = classify_constant(4, nu, kappas)
print(params)

# %%
# Round trip through the model curve.
for drift in (None, 0.8, -0.8):
    n = 4 if drift is None else 5
    model = ConstantCurvatureParams((2.5, 0.7), (0.4, 1.3), drift)
    ks = curvatures(make_jet(realize_constant(model), n)(0.0))
    back = classify_constant(n, model.speed, ks)
    print(f"n={n}  kappas={np.round(ks, 6)}  recovered a={np.round(back.angles, 12)} "
          f"r={np.round(back.radii, 12)} b={back.drift}")

# %%
# The derivative matrix of the model at 0 is invertible exactly when the
# angles are distinct and nonzero.
for a, b in [((1, 2), None), ((1, 2), 3.0), ((0.5, 1.5, 2.0), None)]:
    print(a, b, np.linalg.det(d_matrix(a, b)), d_matrix_det_formula(a, b))
