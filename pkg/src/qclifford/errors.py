class NotInNormalizerError(ValueError):
    """A conjugate failed to be recognized as a Weyl-Heisenberg element."""


class DeterminantError(ArithmeticError):
    pass


class GuardExceededError(RuntimeError):
    """An enumeration or closure would exceed its configured size guard."""


class UnreachableError(RuntimeError):
    pass
