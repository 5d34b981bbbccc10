"""Exception types shared across the routing engine."""


class QosRouteError(Exception):
    """Base class for all engine errors."""


class TopologyParseError(QosRouteError, ValueError):
    """Malformed topology text. ``line`` is 1-based, or None if not line-specific."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TopologyValidationError(QosRouteError, ValueError):
    """Topology text parsed but violates a graph invariant (e.g. disconnected)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoRouteError(QosRouteError):
    """No feasible source-to-destination route exists."""


class EmptyPoolError(NoRouteError):
    """Path enumeration found no source-to-destination path at all."""


class DegenerateWheelError(QosRouteError, ValueError):
    """Roulette wheel with no positive-weight slice."""


class KnowledgeBaseError(QosRouteError):
    """Knowledge base file could not be read or written."""
