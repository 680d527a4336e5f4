"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: validation-type errors exit 1,
I/O and file-format errors exit 2.
"""


class RepoTrendError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(RepoTrendError):
    """A record, argument, or precondition failed validation."""


class ConfigError(ValidationError):
    """Configuration input is missing, empty, or inconsistent."""


class CorpusFormatError(RepoTrendError):
    """The corpus file header is missing or carries an unsupported schema version."""


class StreamOrderError(ValidationError):
    """Stream time moved backwards (documents must arrive in timestamp order)."""


class NormalizationError(ValidationError):
    """A platform payload could not be mapped onto the common record schema."""


class CredentialError(RepoTrendError):
    """A platform client rejected the configured credentials."""


class AdapterError(RepoTrendError):
    """A platform client failed permanently. Carries the query that failed."""

    def __init__(self, message, query=None):
        super().__init__(message)
        self.query = query


class TransientAdapterError(AdapterError):
    """A retryable platform client failure (timeouts, 5xx, rate-limit hiccups)."""


class GeocodeTransportError(RepoTrendError):
    """The geocoder backend kept failing at the transport level.

    Distinct from an unresolvable location, which is a normal None result.
    """
