"""Exception hierarchy shared by all pba modules."""


class PbaError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(PbaError):
    """Malformed input text (.pa, .spg or .g files); carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(PbaError):
    """A model-level invariant is violated (row sums, unknown states, ...)."""


class BudgetExceededError(PbaError):
    """An exhaustive search or frontier grew past its configured budget."""

    def __init__(self, budget_name: str, budget: int, hint: str = ""):
        self.budget_name = budget_name
        self.budget = budget
        msg = f"{budget_name} budget of {budget} exceeded"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class AmbiguityError(PbaError):
    """An ambiguity precondition does not hold for the given automaton."""


class NotFinitelyAmbiguousError(AmbiguityError):
    """The finite-ambiguity shortening procedure found evidence of
    unbounded run growth."""


class PrecisionError(PbaError):
    """An exact comparison could not be decided within the precision cap."""
