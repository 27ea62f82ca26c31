from typing import Any, Dict, Optional


class SchurPowerError(Exception):
    """Base class for every error raised by the schurpower library."""


class InvalidGroupError(SchurPowerError, ValueError):
    """A Cayley table or family parameter does not describe a valid group.

    Args:
        axiom: Name of the first violated group axiom.
        witness: Elements exhibiting the violation.
    """

    def __init__(self, axiom: str, witness: Optional[tuple] = None, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        message = f"invalid group: {axiom}"
        if witness is not None:
            message += f" (witness {witness})"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class DomainMismatchError(SchurPowerError, ValueError):
    """Two partitions or structures live on domains of different size."""


class DomainCapExceededError(SchurPowerError):
    def __init__(self, n: int, m: int, cap: int):
        self.n, self.m, self.cap = n, m, cap
        super().__init__(f"domain size {n}^{m} = {n**m} exceeds the cap {cap}")


class BudgetExceededError(SchurPowerError):
    """A search or refinement ran past its node, round or time budget."""

    def __init__(self, what: str, used: float, budget: float):
        self.what, self.used, self.budget = what, used, budget
        super().__init__(f"{what} budget exceeded: {used} > {budget}")


class AxiomViolationError(SchurPowerError):
    """A partition fails an S-ring or rainbow condition it was required to satisfy."""

    def __init__(self, condition: str, witness: Dict[str, Any]):
        self.condition = condition
        self.witness = witness
        super().__init__(f"{condition} violated: {witness}")


class NotAnSRingSetError(SchurPowerError, ValueError):
    """A subset used as an S-ring subgroup is not a union of classes, not a subgroup, or not normal."""


class TheoremViolationError(SchurPowerError):
    """A structural consequence that always holds for groups failed to hold.

    This signals a bug in the implementation, never a property of the input.
    """

    def __init__(self, statement: str, witness: Optional[Dict[str, Any]] = None):
        self.statement = statement
        self.witness = witness or {}
        super().__init__(f"{statement} failed: {self.witness}")
