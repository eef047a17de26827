"""Exception types shared across the package."""


class HyperlearnError(Exception):
    """Base class for all package errors."""


class ValidationError(HyperlearnError, ValueError):
    """A hypergraph (or file) violates the structural invariants."""

    def __init__(self, report):
        self.report = report
        lines = ", ".join(f"{rule}: {item}" for rule, item in report.violations)
        super().__init__(f"invalid hypergraph ({lines})")


class InstanceTooLargeError(HyperlearnError):
    """A brute-force check was asked to run above its configured size cap."""


class InconsistentOracleError(HyperlearnError):
    """Oracle answers cannot be realized by any member of the target class."""


class BudgetExceededError(HyperlearnError):
    """A learner gave up after exceeding its query budget."""

    def __init__(self, queries, budget):
        self.queries = queries
        self.budget = budget
        super().__init__(f"query budget exceeded: {queries} > {budget}")


class ContractError(HyperlearnError):
    """A strategy or player broke the calling contract (illegal move)."""


class PreconditionError(HyperlearnError, ValueError):
    """The input falls outside the class a learner is defined for."""
