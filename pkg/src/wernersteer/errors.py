"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A state parameter or grid value lies outside its allowed range."""


class UndefinedConditionalError(ZeroDivisionError):
    """A conditional probability has a vanishing normalisation."""


class UnsupportedSettingError(ValueError):
    """The polarizer model cannot realise the requested measurement axis."""


class EmptyCountsError(ValueError):
    """An estimator received a zero coincidence total."""


class AngleMismatchError(ValueError):
    """Counts were recorded at settings that do not match the estimator."""


class InconsistentVisibilitiesError(ValueError):
    """Measured visibilities cannot come from a generalized Werner state."""
