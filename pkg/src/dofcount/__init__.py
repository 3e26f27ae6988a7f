"""Exact degree-of-freedom counts for linear constant-coefficient PDE systems."""

__version__ = "0.1.0"

from .dof import DofReport, dof_ext, dof_graded, dof_pipeline
from .errors import BudgetExceeded, DofError, InternalError, InvalidSystem, ParseError
from .system import DiffSystem, FieldDecl
