"""Exception types raised across the package."""


class ParseError(ValueError):
    """Malformed text input (polynomials, intervals, digit words, ...)."""


class DomainError(ValueError):
    """An input lies outside the range where an operation is defined."""


class UndefinedRootSet(DomainError):
    def __init__(self, msg="undefined root set"):
        super().__init__(msg)


class IncompatibleGenerators(DomainError):
    def __init__(self, msg="incompatible generators"):
        super().__init__(msg)


class MapNotApplicable(DomainError):
    """T_{q,d} applied outside its domain."""


class LemmaCRangeError(DomainError):
    def __init__(self, msg="Lemma C out of range: q must lie in (golden ratio, q_f)"):
        super().__init__(msg)


class PoleInWindow(DomainError):
    def __init__(self, msg="pole in window"):
        super().__init__(msg)


class DegenerateEquation(DomainError):
    def __init__(self, msg="identically satisfied"):
        super().__init__(msg)
