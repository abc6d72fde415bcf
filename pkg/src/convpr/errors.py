"""Exception types shared across the toolkit."""


class InvalidDimension(ValueError):
    """Vector or matrix dimensions are inconsistent with the operator."""


class InvalidParameter(ValueError):
    """A numeric parameter is outside its admissible range."""


class InvalidInput(ValueError):
    """Input data is malformed (bad file contents, non-finite entries)."""


class DegenerateOperator(RuntimeError):
    """A linear operator annihilated a nonzero vector where it must not."""


class NumericalDivergence(RuntimeError):
    """An iteration produced non-finite values."""


class IllConditionedSystem(RuntimeError):
    """An inner linear solve failed to reach its required residual."""


class IoError(OSError):
    """Reading or writing an artifact on disk failed."""
