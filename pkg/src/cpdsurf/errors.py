"""Exception hierarchy shared by every module of the package."""


class CpdError(ValueError):
    """Base class for all errors raised by cpdsurf."""


# Lorentz algebra
class ZeroVector(CpdError):
    pass


class LightLikeInput(CpdError):
    pass


class MixedTimeOrientation(CpdError):
    pass


class DegenerateSpan(CpdError):
    pass


# jets / quadrature
class DomainViolation(CpdError):
    """Argument of an elementary function left its real domain."""


class OutOfDomain(CpdError):
    """Parameter point (or stencil) outside the immersion's rectangle."""


class NoConvergence(CpdError):
    pass


# surface geometry
class DegenerateMetric(CpdError):
    pass


class LightLikeNormal(CpdError):
    pass


# cpd analysis
class NormalDirection(CpdError):
    """Fixed direction is normal to the surface at the point."""


class UnsupportedCausalCombination(CpdError):
    pass


class LightLikeU(CpdError):
    pass


class LeftDomain(CpdError):
    pass


class DegenerateU(CpdError):
    pass


# catalog parameter validation
class VanishingThetaPrime(CpdError):
    pass


class DegenerateM(CpdError):
    pass


class ZeroC(CpdError):
    pass


class VanishingPhi(CpdError):
    pass


class VanishingPhiPrime(CpdError):
    pass


class NonpositiveC2(CpdError):
    pass


class ConfigError(CpdError):
    """Bad command-line or config-file input."""
