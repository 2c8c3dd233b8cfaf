"""Exception types shared across the package."""


class CurveSpecError(ValueError):
    """Invalid curve description (bad variant, parameters or samples)."""


class NonRegularError(ValueError):
    """The derivatives f', ..., f^(k) are (numerically) dependent.

    ``order`` is the first derivative order at which independence fails.
    """

    def __init__(self, order, t=None, message=None):
        self.order = order
        self.t = t
        where = "" if t is None else f" at t={t:.15g}"
        super().__init__(message or f"curve is not regular{where}: derivatives up to order {order} are dependent")


class TubeRegularityError(ValueError):
    """The condition 1 - (x1 - p1) * kappa1 > 0 fails somewhere in the section family."""

    def __init__(self, t, extent, kappa1):
        self.t = t
        self.extent = extent
        self.kappa1 = kappa1
        super().__init__(
            f"tube regularity violated at t={t:.15g}: section extent {extent:.15g} "
            f"times kappa1 {kappa1:.15g} is outside the regular range"
        )


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ClassificationError(ValueError):
    """Constant curvatures that do not correspond to a nondegenerate model curve."""


class CongruenceError(ValueError):
    """Two sampled curves are not related by the isometry fixed by their initial frames."""

    def __init__(self, residual, t):
        self.residual = residual
        self.t = t
        super().__init__(f"curves are not congruent: residual {residual:.3e} at t={t:.15g}")
