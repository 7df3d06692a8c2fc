"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ShortcutForgeError(Exception):
    """Base class for all library errors."""


class GraphInputError(ShortcutForgeError, ValueError):
    pass


class IndexOutOfRange(GraphInputError):
    pass


class SelfLoop(GraphInputError):
    pass


class NotADag(ShortcutForgeError):
    pass


class NotReachable(ShortcutForgeError):
    pass


class NotAChain(ShortcutForgeError):
    pass


class BadK(ShortcutForgeError, ValueError):
    pass


class ParameterError(ShortcutForgeError, ValueError):
    pass


class BadBudget(ParameterError):
    pass


class BadRho(ParameterError):
    pass


class PreconditionViolated(ShortcutForgeError):
    pass


class BudgetExceeded(ShortcutForgeError):
    """An exact oracle was asked to search beyond its caps."""


class RetryExhausted(ShortcutForgeError):
    """A Las Vegas loop used up its retries without a verified output."""


class IterationCapExceeded(ShortcutForgeError):
    pass


class PromiseViolated(ShortcutForgeError):
    """The input provably admits no solution within the requested budget."""


class Infeasible(PromiseViolated):
    """The cutting-plane pool proves no (s, d)-shortcut exists.

    ``constraints`` holds the pooled critical sets and ``lower_bound`` an
    exactly certified lower bound on the fractional cover they require.
    """

    def __init__(self, message: str, constraints=(), lower_bound=None, budget=None):
        super().__init__(message)
        self.constraints = list(constraints)
        self.lower_bound = lower_bound
        self.budget = budget
