"""Frenet apparatus of curves in R^n, reconstruction from curvatures, and tubes around curves."""
from .curve import CurveJet, CurveSpec, arc_length, make_jet
from .errors import (ClassificationError, CongruenceError, CurveSpecError, NonRegularError,
                     QuadratureError, TubeRegularityError)
from .exterior import cross_product, frenet_matrix, skew_normal_form, wedge_norm
from .frenet import FrenetApparatus, apparatus, curvatures, extended_apparatus, frame
from .reconstruct import (ConstantCurvatureParams, FrenetPrescription, classify_constant,
                          integrate_frenet, realize_constant)

__version__ = "0.1.0"
