"""Exception types shared across the package."""


class GridCurlError(Exception):
    """Base class for all package errors."""


class UnknownEnvironmentError(GridCurlError):
    """Raised when an environment id is not one of the supported families."""


class EpisodeOverError(GridCurlError):
    """Raised when step() is called after the episode terminated or truncated."""


class RenderError(GridCurlError):
    """Raised when a level contains an object with no prompt symbol."""


class SubgoalParseError(GridCurlError):
    """Raised when an LLM completion cannot be parsed into subgoal proposals."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class UnsolvableLevelError(GridCurlError):
    """A generated level admits no feasible plan — a generation bug."""


class TeacherError(GridCurlError):
    """Raised when a teacher backend cannot produce a subgoal sequence."""


class TransportError(TeacherError):
    """Raised when the chat endpoint stays unreachable after retries."""


class ConfigError(GridCurlError):
    """Raised for invalid run configurations; carries all field errors at once."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class CheckpointError(GridCurlError):
    """Raised when a checkpoint file is missing fields or has a bad version."""
