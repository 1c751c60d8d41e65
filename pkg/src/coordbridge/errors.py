"""Exception hierarchy for coordbridge."""


class CoordBridgeError(Exception):
    """Base class for all coordbridge errors."""


class AlphabetMismatch(CoordBridgeError):
    """The two transition systems use incomparable label kinds."""


class NotSingleState(CoordBridgeError):
    """An operation restricted to single-state systems got a larger one."""


class UnboundPort(CoordBridgeError):
    """A data constraint mentions a port absent from the assignment."""


class DomainTooLarge(CoordBridgeError):
    """An enumeration would exceed the configured candidate bound."""


class DomainMismatch(CoordBridgeError):
    """Two automata with different data domains cannot be combined."""


class MixedNodesPresent(CoordBridgeError):
    """Mixed nodes must be hidden before a polarity-sensitive operation."""


class NotStateless(CoordBridgeError):
    """The automaton has more than one state."""


class ArityError(CoordBridgeError):
    """A primitive constructor received the wrong number of nodes."""


class NotDisconnected(CoordBridgeError):
    """Component port sets overlap where disjointness is required."""


class InterfaceNotCovered(CoordBridgeError):
    """An architecture interface port belongs to no constituent."""


class CoordinatorPortsOverlap(CoordBridgeError):
    """Coordinator port sets of two architectures are not disjoint."""


class InteractionOutOfInterface(CoordBridgeError):
    """An interaction mentions a port outside the declared interface."""


class NotSimple(CoordBridgeError):
    """An interaction expression violates the simple-connector shape."""

    def __init__(self, reasons):
        self.reasons = tuple(reasons)
        super().__init__("; ".join(self.reasons))


class StateChangingEmpty(CoordBridgeError):
    """An empty-labeled transition changes state and cannot be repaired."""


class PrimeCollision(CoordBridgeError):
    """Port priming could not find a collision-free suffix."""


class FreshNameExhausted(CoordBridgeError):
    """No fresh port name could be generated."""


class DslError(CoordBridgeError):
    """Parsing or validation of a model document failed."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "invalid input"
        super().__init__(first)
