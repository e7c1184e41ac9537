"""Exception hierarchy shared by all modules."""


class ClassLeakError(Exception):
    """Base class for every error raised by this package."""


class EmptyDataset(ClassLeakError, ValueError):
    pass


class InvalidScore(ClassLeakError, ValueError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"non-finite score at index {index}: {value!r}")


class InvalidLabel(ClassLeakError, ValueError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"label at index {index} is not 0/1: {value!r}")


class MissingClass(ClassLeakError, ValueError):
    pass


class DomainError(ClassLeakError, ValueError):
    pass


class DensityUnavailable(ClassLeakError):
    pass


class DegeneratePriors(ClassLeakError, ValueError):
    pass


class UndefinedPrecision(ClassLeakError, ZeroDivisionError):
    pass


class NotAProbability(ClassLeakError, ValueError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"score at index {index} is outside [0, 1]: {value!r}")


class InfeasibleCap(ClassLeakError, ValueError):
    pass


class NumericalFailure(ClassLeakError, ArithmeticError):
    pass


class EmptyCandidateSet(ClassLeakError, ValueError):
    pass
