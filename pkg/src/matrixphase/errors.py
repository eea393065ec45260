"""Exception types shared across the package."""


class MatrixPhaseError(Exception):
    """Base class for all package errors."""


class TermBudgetError(MatrixPhaseError):
    """A symbolic operation exceeded the configured term or degree cap."""


class GridError(MatrixPhaseError):
    """A grid operation was requested that the grid cannot support."""


class ConsistencyError(MatrixPhaseError):
    """A constraint evolution produced an off-range residual above threshold."""


class CFLError(MatrixPhaseError):
    """An explicit stepper was asked to take a step violating its stability bound."""
