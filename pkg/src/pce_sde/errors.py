"""Exception types raised across the package."""


class PceSdeError(Exception):
    """Base class for all package errors."""


class StepSizeUnderflow(PceSdeError, ArithmeticError):
    """The adaptive integrator needed a step below its floor."""


class DomainViolation(PceSdeError, ValueError):
    """A state left the domain where the model equations are defined."""


class PositivityViolation(DomainViolation):
    """A quantity that must stay positive did not."""


class SingularParameterError(PceSdeError, ValueError):
    """A parameter value makes a closed-form expression singular."""


class NodeEvaluationError(PceSdeError):
    """Solving the transformed ODE failed at one quadrature node.

    Attributes
    ----------
    index : int
        Position of the node in the quadrature rule.
    node : float
        Germ value at that node.
    """

    def __init__(self, index: int, node: float, cause: BaseException):
        self.index = index
        self.node = node
        super().__init__(f"node {index} (xi={node!r}) failed: {type(cause).__name__}: {cause}")


class ConfigError(PceSdeError, ValueError):
    """An experiment configuration is malformed."""
