"""Exception hierarchy shared by all modules."""


class MonapproxError(Exception):
    """Base class for every error raised by this package."""


class SignatureError(MonapproxError, ValueError):
    pass


class LiteralSyntaxError(MonapproxError, ValueError):
    """Malformed value-set, theory or family literal."""


class SentenceSyntaxError(MonapproxError, ValueError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class UnknownPredicateError(SentenceSyntaxError):
    def __init__(self, symbol, pos=None, text=None):
        self.symbol = symbol
        super().__init__(f"unknown predicate {symbol!r}", pos, text)


class UnboundVariableError(SentenceSyntaxError):
    def __init__(self, variable, pos=None, text=None):
        self.variable = variable
        super().__init__(f"unbound variable {variable!r}", pos, text)


class BudgetExceeded(MonapproxError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"quantifier elimination needs {required} buckets, budget is {budget}"
        )


class PreconditionError(MonapproxError, ValueError):
    pass


class NotEClosedError(PreconditionError):
    pass


class NotSubfamilyError(PreconditionError):
    pass


class NotAMemberError(PreconditionError):
    pass


class FiniteFamilyError(PreconditionError):
    pass
