"""Exception hierarchy.

Every error carries the name of the operation and the violated condition so
that front ends can report a machine-readable failure.
"""


class UnitRootError(Exception):
    """Base class for all library errors."""

    def __init__(self, operation: str, condition: str, detail: str = ""):
        self.operation = operation
        self.condition = condition
        self.detail = detail
        msg = f"{operation}: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)

    def as_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "operation": self.operation,
            "condition": self.condition,
            "detail": self.detail,
        }


class ContractError(UnitRootError):
    """A precondition of an operation does not hold."""


class ContextMismatch(ContractError):
    pass


class NotAUnit(ContractError):
    pass


class PrecisionError(ContractError):
    """The requested quantity is not determined at the working precision."""


class ConvergenceError(UnitRootError):
    """An iteration did not stabilize within its budget."""


class WindowOverflow(UnitRootError):
    """A result needs exponents outside the window [-W, W].

    ``required`` is the smallest window that would have sufficed when it is
    known, else None.
    """

    def __init__(self, operation: str, required: int | None = None, detail: str = ""):
        self.required = required
        cond = "exponent support escapes the window"
        if required is not None:
            cond += f"; need window >= {required}"
        super().__init__(operation, cond, detail)

    def as_dict(self) -> dict:
        d = super().as_dict()
        d["required_window"] = self.required
        return d
