class BudgetExceeded(Exception):
    """An exact computation was refused because it exceeds the configured budget."""


class InvariantViolation(Exception):
    """A checked identity or bound failed; ``record`` holds the counterexample."""

    def __init__(self, message: str, record: dict | None = None):
        super().__init__(message)
        self.record = record or {}
