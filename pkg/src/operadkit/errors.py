"""Exception hierarchy for the workbench.

Every failure mode that callers are expected to branch on gets its own
class with a stable ``code`` string.  The CLI serialises the code and the
structured payload; library users can catch the classes directly.
"""

from __future__ import annotations

from typing import Any


class WorkbenchError(Exception):
    """Base class for all structured errors raised by this package."""

    code = "WORKBENCH_ERROR"

    def __init__(self, message: str, **payload: Any):
        super().__init__(message)
        self.message = message
        self.payload = dict(payload)

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, **self.payload}


class LevelOutOfDomain(WorkbenchError):
    code = "LEVEL_OUT_OF_DOMAIN"


class AxiomViolation(WorkbenchError):
    code = "AXIOM_VIOLATION"

    def __init__(self, message: str, axiom: str, witness: tuple, **payload: Any):
        super().__init__(message, axiom=axiom, witness=list(witness), **payload)
        self.axiom = axiom
        self.witness = witness


class MissingPair(WorkbenchError):
    code = "MISSING_PAIR"


class SameElement(WorkbenchError):
    code = "SAME_ELEMENT"


class OutOfRange(WorkbenchError):
    code = "OUT_OF_RANGE"


class DomainMismatch(WorkbenchError):
    code = "DOMAIN_MISMATCH"


class TargetTooSmall(WorkbenchError):
    code = "TARGET_TOO_SMALL"


class ResourceLimit(WorkbenchError):
    code = "RESOURCE_LIMIT"


class MalformedTree(WorkbenchError):
    code = "MALFORMED_TREE"


class NotAMorphism(WorkbenchError):
    code = "NOT_A_MORPHISM"

    def __init__(self, message: str, pair: tuple, **payload: Any):
        super().__init__(message, pair=list(pair), **payload)
        self.pair = pair


class ComposeMismatch(WorkbenchError):
    code = "COMPOSE_MISMATCH"


class InvariantBroken(WorkbenchError):
    code = "INVARIANT_BROKEN"


class AntisymmetryViolation(WorkbenchError):
    code = "ANTISYMMETRY_VIOLATION"


class IsoCheckFailed(WorkbenchError):
    code = "ISO_CHECK_FAILED"


class EndoFound(WorkbenchError):
    code = "ENDO_FOUND"


class StrictnessRequired(WorkbenchError):
    code = "STRICTNESS_REQUIRED"


class StrandMismatch(WorkbenchError):
    code = "STRAND_MISMATCH"


class LengthMismatch(WorkbenchError):
    code = "LENGTH_MISMATCH"


class NotQuasibijection(WorkbenchError):
    code = "NOT_QUASIBIJECTION"


class EndpointMismatch(WorkbenchError):
    code = "ENDPOINT_MISMATCH"


class DiagramBroken(WorkbenchError):
    code = "DIAGRAM_BROKEN"


class NotBlockDecomposable(WorkbenchError):
    code = "NOT_BLOCK_DECOMPOSABLE"


class MissingTable(WorkbenchError):
    code = "MISSING_TABLE"


class BoundExceeded(WorkbenchError):
    code = "BOUND_EXCEEDED"


class NotQuasisymmetric(WorkbenchError):
    code = "NOT_QUASISYMMETRIC"


class RelationFailed(WorkbenchError):
    code = "RELATION_FAILED"


class EqualPoints(WorkbenchError):
    code = "EQUAL_POINTS"


class DimensionMismatch(WorkbenchError):
    code = "DIMENSION_MISMATCH"
