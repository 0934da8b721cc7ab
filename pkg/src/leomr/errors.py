"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """A configuration value violates its invariant."""


class JobInfeasibleError(RuntimeError):
    """A job cannot be scheduled (e.g. too few satellites over the AOI)."""


class LinkInfeasibleError(RuntimeError):
    """A link cannot carry data: its Shannon capacity underflows to zero."""


class DirectionMixError(ValueError):
    """Ascending and descending satellites were mixed in one job."""
