"""Exception hierarchy shared across the package."""


class CaccioppoliError(Exception):
    """Base class for all package errors."""


class DomainError(CaccioppoliError):
    """An argument is outside the domain of the operation."""


class ContractError(CaccioppoliError):
    """A declared contract (symmetry, bound, finiteness) was violated."""


class StructuralError(CaccioppoliError):
    """A partition failed a structural invariant (e.g. non-conforming mesh)."""


class GeneratorError(CaccioppoliError):
    """A sequence family's recorded closed form disagrees with computation."""


class FormatError(CaccioppoliError):
    """A file could not be parsed against its declared schema."""
