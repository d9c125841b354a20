"""Exception types shared across the package."""

from __future__ import annotations


class HopecheckError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(HopecheckError):
    """The formula text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownAgentError(HopecheckError):
    """A formula mentions an agent outside the declared universe."""

    def __init__(self, agent_id: str, universe=()):
        declared = ", ".join(sorted(str(a) for a in universe)) or "none"
        super().__init__(f"unknown agent {agent_id!r} (declared: {declared})")
        self.agent_id = agent_id


class DesugarError(HopecheckError):
    """A derived operator cannot be expanded (bad bound, empty group, ...)."""


class ModelError(HopecheckError):
    """A model document or constructor argument is ill-formed."""


class FrameConditionError(ModelError):
    """A raw model was rejected because it violates frame conditions."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        summary = "; ".join(str(v) for v in self.violations)
        super().__init__(f"frame conditions violated: {summary}")


class EnumerationLimitError(HopecheckError):
    """A model enumeration would exceed the configured ceiling."""

    def __init__(self, size: int, limit: int):
        super().__init__(
            f"enumeration of {size} models exceeds the ceiling of {limit} "
            f"(raise it explicitly or via HOPECHECK_MAX_MODELS)"
        )
        self.size = size
        self.limit = limit


class EvalError(HopecheckError):
    """Evaluation was asked about an unknown world or agent."""


class RunSystemError(HopecheckError):
    """A run system description is ill-formed."""


class TypeSystemError(HopecheckError):
    """An agent-type system is ill-formed or a type name is unknown."""


class PuzzleError(HopecheckError):
    """A puzzle instance is outside the propositional solver's fragment."""
