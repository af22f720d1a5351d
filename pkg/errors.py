class LabError(Exception):
    exit_code = 1


class ConfigError(LabError):
    exit_code = 2


class NumericalError(LabError):
    exit_code = 3


class DegenerateShockError(NumericalError):
    def __init__(self, u_minus, u_plus):
        super().__init__(f"degenerate shock: u_minus == u_plus == {u_minus!r}")
        self.u_minus = u_minus
        self.u_plus = u_plus


class RootFindError(NumericalError):
    def __init__(self, message, bracket=None):
        if bracket is not None:
            message = f"{message} (bracket={bracket})"
        super().__init__(message)
        self.bracket = bracket


class KineticError(NumericalError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InteractionBudgetError(NumericalError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class IntegrationError(NumericalError):
    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class InvariantViolation(LabError):
    exit_code = 4
