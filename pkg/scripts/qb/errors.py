# qb/errors.py
from __future__ import annotations


class QBSimError(RuntimeError):
    """Base class for everything the engine raises on purpose."""


class LayoutError(QBSimError, ValueError):
    """Operator or slot does not fit the Hilbert layout."""


class StateError(QBSimError, ValueError):
    """Density matrix (or expectation value) outside tolerance."""


class IntegrationError(QBSimError):
    """Trace or Hermiticity drift above the abort threshold."""

    def __init__(self, msg: str, *, t: float, step: int, trace_err: float, herm_err: float):
        super().__init__(msg)
        self.t = t
        self.step = step
        self.trace_err = trace_err
        self.herm_err = herm_err


class SweepPointError(QBSimError):
    """An integration failure tagged with the sweep point it happened at."""

    def __init__(self, param: str, value: float, cause: Exception):
        super().__init__(f"{param}={value:g}: {cause}")
        self.param = param
        self.value = value
        self.cause = cause


class UnknownPresetError(QBSimError, KeyError):
    def __init__(self, name: str, valid: list[str]):
        super().__init__(name)
        self.name = name
        self.valid = valid

    def __str__(self) -> str:
        return f"unknown preset '{self.name}' (valid: {', '.join(self.valid)})"
