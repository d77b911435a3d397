"""Exception types shared across the package."""


class EquibarError(Exception):
    """Base class for all errors raised by equibar."""


class TruncationError(EquibarError):
    """An operation needs simplices above the stored truncation degree."""


class RelationError(EquibarError):
    """A structure map violates one of its defining identities.

    ``degree``, ``index`` and ``simplex`` locate the first violation found.
    """

    def __init__(self, message, degree=None, index=None, simplex=None):
        super().__init__(message)
        self.degree = degree
        self.index = index
        self.simplex = simplex


class NotSimplicialError(RelationError):
    """A degreewise map fails to commute with faces or degeneracies."""


class MonoidError(EquibarError):
    """Multiplication or involution tables violate the monoid axioms."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class HypothesisError(EquibarError):
    """A structural hypothesis (commutativity, cofinality, ...) fails."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CategoryError(EquibarError):
    """Composition, identity or duality data are inconsistent."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FormError(EquibarError):
    """A bilinear form fails a symmetry or nondegeneracy requirement."""
