"""Exception types shared across the package."""


class RankDeficientError(ValueError):
    """A full-rank lattice was required but the span is smaller."""


class NonCommutingError(ValueError):
    """F and G do not commute, so boosting functions are not defined."""


class InfiniteReidemeisterError(ValueError):
    """An operation needed a finite Reidemeister set."""


class BudgetExceededError(RuntimeError):
    """A brute-force search would enumerate more classes than allowed."""


class LevelError(ValueError):
    """Levels are incompatible (e.g. m does not divide n)."""


class PreconditionError(Exception):
    """A hypothesis of a counting formula could not be verified.

    `failures` lists each violated hypothesis as a short sentence.
    """

    def __init__(self, what: str, failures: list[str]):
        self.what = what
        self.failures = list(failures)
        super().__init__(f"{what} refused: " + "; ".join(self.failures))
