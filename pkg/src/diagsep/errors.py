"""Exception types and the node-count budget shared across the package."""
import os

DEFAULT_MAX_NODES = 16_000_000


class DiagsepError(Exception):
    """Base class for all package-specific errors."""


class DomainMismatchError(DiagsepError):
    """Operands belong to different symbolic systems or spaces."""


class ResolutionError(DiagsepError):
    """A point's symbol window is too short for the requested operation."""


class ParameterError(DiagsepError):
    """A configuration value violates its documented range or relation."""


class ResourceBudgetError(DiagsepError):
    """An enumeration or graph build would exceed the node budget."""


class CaseError(DiagsepError):
    """A route constructor was called outside its precondition; use the sibling case."""


def max_nodes() -> int:
    """Node budget for enumerations and graph builds (env CTL_MAX_NODES overrides)."""
    raw = os.environ.get("CTL_MAX_NODES")
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParameterError(f"CTL_MAX_NODES must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ParameterError("CTL_MAX_NODES must be positive")
    return value


def check_budget(requested: int, what: str) -> None:
    limit = max_nodes()
    if requested > limit:
        raise ResourceBudgetError(
            f"{what} needs {requested} items, budget is {limit} (CTL_MAX_NODES)"
        )
