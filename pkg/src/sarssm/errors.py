"""Exception hierarchy shared by all sarssm modules.

Every error raised by the library derives from :class:`SarSsmError` so callers
can catch one type at the CLI boundary while tests can assert on the precise
failure class.
"""


class SarSsmError(Exception):
    """Base class for all sarssm errors."""


class ConfigError(SarSsmError):
    """Pipeline or scenario configuration violates the schema."""


# --- stack / series ingestion ---------------------------------------------

class MissingFile(SarSsmError):
    pass


class HeaderPayloadMismatch(SarSsmError):
    """stack.bin byte count disagrees with the stack.json header."""


class NonMonotonicDates(SarSsmError):
    pass


class NonFiniteSample(SarSsmError):
    """A pixel contains NaN/Inf; carries the first offending flat index."""

    def __init__(self, index: int):
        super().__init__(f"non-finite complex sample at flat index {index}")
        self.index = index


class ParseError(SarSsmError):
    """CSV row could not be parsed; carries the 1-based row number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class NegativePrecip(SarSsmError):
    pass


class OutOfRangeSsm(SarSsmError):
    pass


# --- distributed scatterer formation ---------------------------------------

class LengthMismatch(SarSsmError):
    pass


class EmptySeries(SarSsmError):
    pass


class WindowOutOfBounds(SarSsmError):
    pass


class ZeroRow(SarSsmError):
    """A pixel-selection row has zero Euclidean norm."""


class ZeroInterferogram(SarSsmError):
    pass


# --- dryness analysis -------------------------------------------------------

class DateNotCovered(SarSsmError):
    pass


class EmptyCandidates(SarSsmError):
    pass


class DegenerateFit(SarSsmError):
    """Regression abscissae carry no spread; slope undefined."""


# --- decorrelation model ----------------------------------------------------

class TooFewPairs(SarSsmError):
    pass


class DegenerateTimeSpans(SarSsmError):
    pass


# --- dielectric model -------------------------------------------------------

class OutOfRangeMoisture(SarSsmError):
    pass


class FrequencyOutsideCalibration(SarSsmError):
    pass


class NonPhysicalPermittivity(SarSsmError):
    pass


# --- forward model / inversion ----------------------------------------------

class SingularPair(SarSsmError):
    """Both wavenumbers purely real and equal; interferometric value diverges."""


class TooFewAcquisitions(SarSsmError):
    pass


# --- metrics ------------------------------------------------------------------

class InsufficientPairs(SarSsmError):
    pass


class ZeroVariance(SarSsmError):
    """Correlation undefined because one series is constant."""


# --- simulator ----------------------------------------------------------------

class FactorizationFailure(SarSsmError):
    """Target covariance could not be factorized even after PSD projection."""
