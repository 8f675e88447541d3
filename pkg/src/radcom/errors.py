"""Exception types raised by the radcom package."""


class RadcomError(Exception):
    """Base class for all radcom errors."""


class AdmissibilityError(RadcomError, ValueError):
    """A delay/Doppler pair falls outside the region the frame can represent."""


class ConfigError(RadcomError, ValueError):
    """An experiment configuration is malformed or inconsistent."""


class SingularFisherError(RadcomError):
    """The Fisher information matrix is singular; no variance bound exists."""
