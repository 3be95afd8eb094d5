"""Exception hierarchy shared by every subsystem."""


class VanetError(Exception):
    """Base class for all simulator errors."""


class PastEvent(VanetError):
    pass


class BadRange(VanetError):
    pass


class BadConfig(VanetError):
    pass


class UnknownNode(VanetError):
    pass


class InvariantViolation(VanetError):
    pass


class IllegalTransition(VanetError):
    def __init__(self, current, new):
        super().__init__(f"illegal transition {current.value} -> {new.value}")
        self.current = current
        self.new = new


class NotAdjacent(VanetError):
    pass


class NotRunning(VanetError):
    pass


class NotFound(VanetError):
    pass


class WrongOwner(VanetError):
    pass


class NoNeighbors(VanetError):
    pass


class RouteBroken(VanetError):
    pass


class NoFeasiblePath(VanetError):
    pass


class BadTask(VanetError):
    pass


class ConfigError(VanetError):
    """Base for configuration failures surfaced by the CLI."""


class ConfigNotFound(ConfigError):
    pass


class ParseError(ConfigError):
    def __init__(self, msg, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


class ValidationError(ConfigError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  {p}" for p in self.problems))


class IoError(VanetError):
    pass
