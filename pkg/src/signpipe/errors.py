"""Exception types shared across the pipeline."""

from __future__ import annotations


class SignpipeError(Exception):
    """Base class for every error raised by this package."""

    def payload(self) -> dict:
        """Machine-readable form used by the CLI's stderr error channel."""
        return {"error": type(self).__name__, "message": str(self)}


class MalformedDocument(SignpipeError):
    """Task input is not parseable JSON."""


class SchemaViolation(SignpipeError):
    """Task JSON parsed but breaks the task schema.

    Carries the offending task id (when known) and a JSON-path-ish locator.
    """

    def __init__(self, message: str, task_id: str | None = None, path: str | None = None):
        self.task_id = task_id
        self.path = path
        where = []
        if task_id:
            where.append(f"task {task_id!r}")
        if path:
            where.append(f"at {path}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)

    def payload(self) -> dict:
        out = super().payload()
        out.update({"task_id": self.task_id, "path": self.path})
        return out


class EmptyTranslation(SignpipeError):
    """Every token of a step was filtered away; caller must fall back."""


class CharsetViolation(SignpipeError):
    """A gloss token contains characters outside A-Z, 0-9 and hyphen."""


class NetworkFailure(SignpipeError):
    """Chat endpoint unreachable after the configured number of retries."""


class MalformedResponse(SignpipeError):
    """Chat endpoint answered, but not with the JSON shape we asked for."""

    def __init__(self, message: str, position: str | None = None, task_id: str | None = None):
        self.position = position
        self.task_id = task_id
        parts = [message]
        if position:
            parts.append(f"at {position}")
        if task_id:
            parts.append(f"(task {task_id!r})")
        super().__init__(" ".join(parts))


class MissingCredential(SignpipeError):
    """A live chat call was required but no API credential is configured."""


class UnresolvableCrucialGloss(SignpipeError):
    """A meaning-carrying gloss fell through every fallback rung."""

    def __init__(self, token: str, step_index: int | None = None):
        self.token = token
        self.step_index = step_index
        ctx = f" in step {step_index}" if step_index is not None else ""
        super().__init__(f"no video, decomposition, fingerspelling or synonym for crucial gloss {token!r}{ctx}")


class UndefinedMetric(SignpipeError):
    """Metric denominator is zero for the given corpus."""


class AlignmentError(SignpipeError):
    """Hypothesis and reference corpora are not aligned 1:1."""
