"""Exception hierarchy shared by the engine, the comparator and the CLI"""


class SimulationError(Exception):
    """Base class for every error raised on purpose by this package"""

    exit_code = 1


class ConfigError(SimulationError, ValueError):
    """Run configuration could not be parsed or violates a declared range"""

    exit_code = 2

    def __init__(self, message, key=None, line=None):
        self.message = message
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class UnitSystemError(SimulationError, ValueError):
    exit_code = 2


class NumericalError(SimulationError):
    """A run left the regime in which its numbers can be trusted"""

    exit_code = 3


class CausticError(NumericalError):
    """Adjacent rays crossed; tube width vanished"""


class EnergyDriftError(NumericalError):
    pass


class TurningPointError(NumericalError):
    """E - V reached zero along a ray"""


class EvanescentError(NumericalError):
    """Refractive index n^2 <= 0 was entered"""


class DegenerateFrontError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class RunawayError(NumericalError):
    pass


class DomainEscapeError(NumericalError):
    """Probability reached the reflecting walls of the comparator box"""


class NodeError(NumericalError):
    """Guidance or Madelung quantities requested at a node of psi"""


class FringeError(NumericalError):
    pass


class OutOfDomainError(NumericalError):
    """Tabulated field queried outside its sample grid"""


class TrajectoryIOError(SimulationError):
    exit_code = 4
