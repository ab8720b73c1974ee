"""Exception types raised across the package."""


class SolitonError(ValueError):
    """Base class for all errors raised by :mod:`imcf_solitons`."""


class OutOfDomain(SolitonError):
    pass


class StepTooLarge(SolitonError):
    pass


class DegenerateMetric(SolitonError):
    pass


class MeanCurvatureVanishes(SolitonError):
    """|H| vanishes, so the flow speed -H/|H|^2 is undefined."""


class NotASoliton(SolitonError):
    """<H, phi> vanishes, no finite velocity constant fits."""


class AllSamplesDegenerate(SolitonError):
    pass


class CuspPoint(SolitonError):
    pass


class DimensionMismatch(SolitonError):
    pass


class CurveThroughOrigin(SolitonError):
    pass


class ArgumentJumpTooLarge(SolitonError):
    pass


class NonRegularFactor(SolitonError):
    pass


class NotLagrangian(SolitonError):
    pass


class UnknownName(SolitonError):
    pass


class BadParams(SolitonError):
    pass


class ConvexityLost(SolitonError):
    pass
