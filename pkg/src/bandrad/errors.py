"""Exception types shared across the solver."""


class BandradError(Exception):
    """Base class for all solver errors."""


class ConfigError(BandradError):
    """Invalid configuration or construction arguments."""


class SolverError(BandradError):
    """Numerical failure during a solve (bad regime, too-large dt, ...)."""
