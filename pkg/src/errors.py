"""Exception hierarchy shared by the computation modules."""


class SeifertError(Exception):
    """Base class for every domain error raised by the library."""


class IndexSyntaxError(SeifertError, ValueError):
    """Index or class text does not match the grammar."""


class InvalidBranchIndex(SeifertError, ValueError):
    """A branch index (multiplicity of an exceptional fiber) is below 2."""


class InvalidGenus(SeifertError, ValueError):
    """Base genus is negative."""


class SignatureMismatch(SeifertError, ValueError):
    """Two cohomology classes live over different Fuchsian signatures."""


class IndexMismatch(SeifertError, ValueError):
    """A representation belongs to a different Seifert index than expected."""


class NotNormalized(SeifertError, ValueError):
    """A class or index is required in normal form (0 <= beta_j < alpha_j)."""


class NotEquivalent(SeifertError, ValueError):
    """Two classes are not equivalent in Ext(Gamma; Z/2Z)."""


class NotRealizable(SeifertError, ValueError):
    """A class fails the Jankins-Neumann criteria."""


class UnsupportedShape(SeifertError, ValueError):
    """The index is outside the genus-0, three-fiber family."""


class NumericalMismatch(SeifertError, ArithmeticError):
    """An exact formula and its numerical oracle disagree."""


class DegenerateReducible(SeifertError, ArithmeticError):
    """The constructed representation degenerates to a reducible one."""


class ConstructionInfeasible(SeifertError, ArithmeticError):
    """No SU(1,1) matrix satisfies the trace conditions of the triple."""


class NonRealResult(SeifertError, ArithmeticError):
    """A conjugation into SL(2,R) left imaginary parts above tolerance."""


class BatchFileError(SeifertError, ValueError):
    """A batch file cannot be decoded as UTF-8 text."""
