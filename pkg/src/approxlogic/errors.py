"""Exception hierarchy.

Input problems derive from :class:`InputError`, algebra defects from
:class:`AlgebraDefect`, and failures of a construction that should have
succeeded derive from :class:`ConstructionError` (these may carry a partial
decomposition trace).
"""


class ApproxLogicError(Exception):
    pass


class InputError(ApproxLogicError, ValueError):
    pass


class CycleDetected(InputError):
    pass


class UnknownElement(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ArityOutOfRange(InputError):
    pass


class UnknownName(InputError):
    pass


class ChainSizeOutOfRange(InputError):
    pass


class DomainTooLarge(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class NotCoverPair(InputError):
    pass


class LevelOutOfRange(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class TableShapeMismatch(InputError):
    pass


class ArityMismatch(InputError):
    pass


class UnboundUnary(InputError):
    pass


class UnboundVariable(InputError):
    pass


class BadLength(InputError):
    pass


class BadChar(InputError):
    pass


class NotMonotone(InputError):
    pass


class FormulaSyntaxError(InputError):
    pass


class AlgebraDefect(ApproxLogicError):
    """The operation tables violate an axiom the construction depends on."""


class NoResidual(AlgebraDefect):
    pass


class NonConstantDot(AlgebraDefect):
    pass


class ConstructionError(ApproxLogicError):
    def __init__(self, message, trace=None, witness=None):
        super().__init__(message)
        self.trace = trace
        self.witness = witness


class NonMonotonePart(ConstructionError):
    pass


class NoProgress(ConstructionError):
    pass


class IterationOverflow(ConstructionError):
    pass


class NotRepresentable(ConstructionError):
    pass
