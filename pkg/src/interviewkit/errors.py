"""Exception types shared across the engine.

Every error the public operations can raise lives here so callers (and the
HTTP layer) can map them without importing half the package.
"""


class InterviewKitError(Exception):
    """Base class for all errors raised by this package."""


# --- document pipeline ---------------------------------------------------

class UnsupportedFormat(InterviewKitError):
    """The payload does not parse under its declared format."""


class EmptyDocument(InterviewKitError):
    """No extractable text in the document."""


class InvalidParams(InterviewKitError):
    """Operation parameters violate a precondition."""


class UnparseableMarkdown(InterviewKitError):
    """Structuring produced markdown with no recognizable headings."""


# --- vector index ---------------------------------------------------------

class ProviderUnavailable(InterviewKitError):
    """An external provider (embedding, STT, TTS) could not be reached."""


class DimensionMismatch(InterviewKitError):
    """Provider returned a vector of the wrong dimension."""


class IoFailure(InterviewKitError):
    """Persistence path could not be read or written."""


class CorruptIndex(InterviewKitError):
    """Persisted index failed its integrity check."""


# --- LLM orchestration ----------------------------------------------------

class LlmFailure(InterviewKitError):
    """LLM call failed; ``retryable`` hints whether a retry may help."""

    def __init__(self, message: str, *, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class SchemaViolation(InterviewKitError):
    """LLM output failed schema validation even after the repair retry."""


class UnknownBackend(InterviewKitError):
    """Request named a backend that was never registered."""


class DuplicateBackend(InterviewKitError):
    """Backend id already registered."""


class BackendUnavailable(InterviewKitError):
    """Backend kept failing after all retries."""


class BackendTimeout(InterviewKitError):
    """Backend timed out on every attempt."""


# --- metrics ---------------------------------------------------------------

class EmptyAfterFiltering(InterviewKitError):
    """All tokens were removed by segmentation or stop-word filtering."""


class EmptySetInput(InterviewKitError):
    """Set-based metric received an empty token set."""


class NoFeedback(InterviewKitError):
    """User-experience score requested with zero feedback events."""


# --- question bank ----------------------------------------------------------

class InsufficientItems(InterviewKitError):
    """Rebalancing targets cannot be met with the available items."""


# --- interview session -------------------------------------------------------

class EmptyBank(InterviewKitError):
    """Session cannot start without questions."""


class OutOfTurn(InterviewKitError):
    """Turn order violated (two candidate turns in a row, etc.)."""


class SessionClosed(InterviewKitError):
    """Operation on a session that already closed."""


class SessionStillRunning(InterviewKitError):
    """Report requested before the session reached closing."""


class DuplicateFeedback(InterviewKitError):
    """A second rating for the same exchange."""


class UnknownExchange(InterviewKitError):
    """Feedback or contest referenced an exchange that does not exist."""


# --- media adapters ----------------------------------------------------------

class UnsupportedSampleRate(InterviewKitError):
    """Audio sample rate outside the supported set."""


class UnsupportedLanguage(InterviewKitError):
    """Provider does not speak the requested language."""
