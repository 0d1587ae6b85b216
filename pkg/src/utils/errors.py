from typing import Any, Dict, List, Optional


class MoebiusError(RuntimeError):
    """Base class for every failure raised by the toolkit.

    `category` is the machine-readable tag the CLI reports; `details`
    carries whatever numbers explain the failure.
    """

    category = "error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.category, "message": self.message, "details": self.details}


class InputError(MoebiusError):
    category = "input"


class InvariantError(MoebiusError):
    category = "invariant"


class ConfigurationError(MoebiusError):
    category = "configuration"


class PreconditionError(MoebiusError):
    category = "precondition"


class DegeneracyError(MoebiusError):
    category = "degeneracy"


class GeometryError(MoebiusError):
    category = "geometry"


class NumericError(MoebiusError):
    category = "numeric"


class SizeError(MoebiusError):
    category = "size"


class MajorantOverflowError(NumericError):
    category = "overflow"

    def __init__(self, message: str, l_reached: int, partial: List[Any]):
        super().__init__(message, {"l_reached": l_reached})
        self.l_reached = l_reached
        self.partial = partial


class FlowError(MoebiusError):
    category = "flow"
