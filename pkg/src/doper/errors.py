"""Exception hierarchy shared by all modules.

``DomainError`` covers every failure that stems from mathematically invalid
input (the CLI maps it to exit status 1).  ``InternalInconsistency`` and
``SaturationFailure`` indicate arithmetic bugs rather than bad input.
"""

from __future__ import annotations


class DomainError(Exception):
    """Input outside the domain of an operation."""


class RepeatedEntries(DomainError):
    """A multiset with repeated entries was given where a subset is required."""


class NotDistinctClass(DomainError):
    """A radius class whose representative has repeated entries."""


class HigherOrderPole(DomainError):
    """A differential form has a pole of order greater than one."""


class NonSplitCharPoly(DomainError):
    """A residue characteristic polynomial does not split over F_p."""


class NotDormant(DomainError):
    """The p-curvature of a connection does not vanish."""


class OperAxiomFailure(DomainError):
    """An oper axiom fails; ``axiom`` names the first failing condition."""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"{axiom}: {detail}" if detail else axiom)


class PreconditionViolated(DomainError):
    """Parameters violate a stated precondition."""


class NoUnit(DomainError):
    """A structure-constant table defines a ring without a unit."""


class NotAssociative(DomainError):
    """A structure-constant table defines a non-associative product."""


class DegenerateSpectrum(DomainError):
    """Simultaneous diagonalization failed at the working precision."""


class IntegralityFailure(DomainError):
    """A numerically evaluated count is not within tolerance of an integer."""

    def __init__(self, value, residual):
        self.value = value
        self.residual = residual
        super().__init__(f"value {value} is {residual} away from the nearest integer")


class NotInteger(DomainError):
    """An exact cyclotomic evaluation did not produce a rational integer."""


class InternalInconsistency(RuntimeError):
    """An identity that must hold by construction failed (arithmetic bug)."""


class SaturationFailure(RuntimeError):
    """A lattice that must be saturated is not (arithmetic bug)."""
