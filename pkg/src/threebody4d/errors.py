"""Exception types shared across the package."""


class CollisionError(ValueError):
    """A squared mutual distance fell below the collision tolerance."""


class ChartSingular(ValueError):
    """The local rotation chart is singular at the requested point.

    Raised when the oriented area A vanishes or when cos(2*psi1) equals
    cos(2*psi2), where the coordinate change cannot be inverted.
    """


class DegeneratePlane(ChartSingular):
    """x1 and x2 do not span a 2-plane (oriented area A = 0)."""


class KineticDomainError(ValueError):
    """L3^2 exceeds Delta^2 or Sigma^2, so the kinetic roots turn complex."""


class DegenerateMomenta(ValueError):
    """mu1 == mu2 (or |mu1| == |mu2|), where the restricted form degenerates."""


class NoRealMomenta(ValueError):
    """The equilibrium conditions give a non-positive mu_i^2."""


class NoConvergence(RuntimeError):
    """An iterative solver ran out of iterations."""


class DegenerateHessian(RuntimeError):
    """|det| of a Hessian fell below tolerance where definiteness is needed."""
