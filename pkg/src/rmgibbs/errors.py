"""Exception types shared across the package."""


class RmGibbsError(Exception):
    """Base class for all library errors."""


class ParameterError(RmGibbsError, ValueError):
    """An argument is outside its documented domain."""


class DimensionError(RmGibbsError, ValueError):
    """Operands have incompatible lengths or shapes."""


class ResourceLimitError(RmGibbsError, RuntimeError):
    """An exact enumeration would exceed the configured cap."""
