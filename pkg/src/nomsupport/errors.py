"""Exceptions shared across the pipeline."""


class NomsupportError(Exception):
    """Base class for all package errors."""


class MalformedInputError(NomsupportError):
    """Input violates a format precondition (bad lemma, bad file line)."""


class InsufficientEvidenceError(NomsupportError):
    """A stage found too little corpus evidence to proceed.

    `stage` names the pipeline stage that gave up, so callers can report
    where the evidence ran out.
    """

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


class DependencyError(NomsupportError):
    """A stage was run before the stage that produces its input."""

    def __init__(self, missing: str, run_first: str):
        self.missing = missing
        self.run_first = run_first
        super().__init__(
            f"missing intermediate {missing!r}; run the {run_first!r} stage first"
        )
