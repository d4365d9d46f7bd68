"""Exception hierarchy shared by every layer.

Each error carries a stable short ``code`` so the CLI and the HTTP service
can map failures to diagnostics and status codes without string matching.
"""

from __future__ import annotations


class DsepError(Exception):
    """Base class for all analysis errors."""

    code = "ERROR"


# --- graph construction ---------------------------------------------------

class InvalidNodeName(DsepError):
    code = "INVALID_NAME"


class DuplicateNode(DsepError):
    code = "DUP_NODE"


class DuplicateEdge(DsepError):
    code = "DUP_EDGE"


class SelfLoop(DsepError):
    code = "SELF_LOOP"


class UnknownNode(DsepError):
    code = "UNKNOWN_NODE"


class AttributeConflict(DsepError):
    code = "ATTR_CONFLICT"


class CycleCreated(DsepError):
    """Raised when an edge would close a directed cycle; names the cycle."""

    code = "CYCLE"

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("edge would create cycle " + " -> ".join(self.cycle))


# --- path queries ---------------------------------------------------------

class SameNode(DsepError):
    code = "SAME_NODE"


class InvalidPath(DsepError):
    code = "INVALID_PATH"


class PathExplosion(DsepError):
    code = "PATH_EXPLOSION"

    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"number of simple paths exceeds the cap of {cap}")


# --- conditioning / adjustment preconditions ------------------------------

class LatentInSet(DsepError):
    code = "LATENT_IN_SET"


class EndpointInSet(DsepError):
    code = "ENDPOINT_IN_SET"


class MediatorInSet(DsepError):
    code = "MEDIATOR_IN_SET"


class TooManyCandidates(DsepError):
    code = "TOO_MANY_CANDIDATES"


class NotASelectionNode(DsepError):
    code = "NOT_A_SELECTION_NODE"


# --- probabilistic oracles ------------------------------------------------

class ZeroProbabilityEvent(DsepError):
    code = "ZERO_PROBABILITY_EVENT"


class DegenerateVariance(DsepError):
    code = "DEGENERATE_VARIANCE"


class InsufficientSamples(DsepError):
    code = "INSUFFICIENT_SAMPLES"


class SingularCovariance(DsepError):
    code = "SINGULAR_COVARIANCE"
