class HyperballError(Exception):
    pass


class DimensionMismatch(HyperballError):
    pass


class ZeroVectorError(HyperballError):
    pass


class NotInGroup(HyperballError):
    def __init__(self, *args, **kwargs):
        residual = kwargs.pop("residual", None)
        super(NotInGroup, self).__init__(*args, **kwargs)
        self.residual = residual


class DenominatorNearZero(HyperballError):
    pass


class OutsideBall(HyperballError):
    pass


class DegenerateSpectrum(HyperballError):
    pass


class NotHyperbolic(HyperballError):
    pass


class NormalizationFailure(HyperballError):
    pass


class InvalidParameter(HyperballError):
    pass


class BranchCut(HyperballError):
    pass


class FiberConstraintError(HyperballError):
    pass


class StepTooSmall(HyperballError):
    pass


class NonConvergent(HyperballError):
    def __init__(self, *args, **kwargs):
        detail = kwargs.pop("detail", None)
        super(NonConvergent, self).__init__(*args, **kwargs)
        assert detail is None or type(detail) == dict, "detail must be dict type"
        self.detail = detail


class ToleranceNotMet(NonConvergent):
    pass


class InvalidCoordinates(HyperballError):
    pass


class CurveNotClosed(HyperballError):
    pass


class CoefficientOverflow(HyperballError):
    pass


class OddWeightVector(HyperballError):
    pass


class EnumerationOverflow(HyperballError):
    pass


class AssumptionViolation(HyperballError):
    pass


class InvariantRegistryError(HyperballError):
    pass


class ParseError(HyperballError, ValueError):
    pass


class ConfigError(HyperballError):
    pass
