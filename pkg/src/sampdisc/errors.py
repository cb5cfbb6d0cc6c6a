"""Exception types shared across the toolkit."""


class SampdiscError(Exception):
    """Base class for all toolkit errors."""


class InvalidSpectrumError(SampdiscError, ValueError):
    """Spectrum is empty, malformed, or contains duplicate frequencies."""


class InvalidRatioError(SampdiscError, ValueError):
    """Lacunary ratio must exceed 1."""


class UnsupportedDomainError(SampdiscError, ValueError):
    """Operation does not support this domain kind (or mix of kinds)."""


class InvalidPointError(SampdiscError, ValueError):
    """A point does not belong to the domain (wrong shape or out of range)."""


class InvalidSampleError(SampdiscError, ValueError):
    """Point set is empty, too small, or inconsistent with the space."""


class InvalidExponentError(SampdiscError, ValueError):
    """Norm exponent outside the supported range."""


class InvalidWeightError(SampdiscError, ValueError):
    """Weights must be strictly positive and match the sample length."""


class UnsupportedNormError(SampdiscError, ValueError):
    """Requested norm combination is undefined (e.g. weighted sup norm)."""


class InvalidTargetError(SampdiscError, TypeError):
    """Target cannot be evaluated on the domain."""


class DegenerateSpaceError(SampdiscError, ValueError):
    """Basis is numerically rank-deficient where full rank is required."""


class MissingSeedError(SampdiscError, ValueError):
    """Randomized operation called without a seed."""


class OracleTooLargeError(SampdiscError, ValueError):
    """Brute-force oracle refused: dimension above its cost guard."""


class FactorExtractionError(SampdiscError, ValueError):
    """Certificate transfer requires every tensor factor to contain the
    constant functions; some factor does not."""


class HeuristicCertificateError(SampdiscError, ValueError):
    """A certified certificate is required; a heuristic one was supplied."""


class UnboundedBoundError(SampdiscError, ValueError):
    """Lower discretization constant is zero; the error bound is unbounded."""


class BudgetExhaustedError(SampdiscError, RuntimeError):
    """Randomized search ran out of retries.

    Carries the best attempt found so far in ``best_points`` and
    ``best_certificate``.
    """

    def __init__(self, message, best_points=None, best_certificate=None):
        super().__init__(message)
        self.best_points = best_points
        self.best_certificate = best_certificate


class SearchFailedError(SampdiscError, RuntimeError):
    """No admissible sample size found; carries the success-rate curve."""

    def __init__(self, message, curve=None):
        super().__init__(message)
        self.curve = curve if curve is not None else []


class ConfigError(SampdiscError, ValueError):
    """Experiment configuration rejected; ``path`` names the bad field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
