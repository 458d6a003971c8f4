from contextlib import contextmanager
from typing import Iterator

from fastapi import HTTPException

from .config import Settings, get_settings
from .core.errors import BiharpError, InvariantViolation
from .core.haar import HaarExpansion
from .schemas.expansion import HaarExpansionIn


def settings_dependency() -> Settings:
    return get_settings()


def require_depth(expansion: HaarExpansionIn, settings: Settings) -> HaarExpansion:
    """
    Converts a request body into a HaarExpansion, refusing depths above
    MAX_DEPTH and empty expansions.
    """
    if expansion.max_level > settings.MAX_DEPTH:
        raise HTTPException(status_code=400, detail=f"maxLevel {expansion.max_level} exceeds {settings.MAX_DEPTH}")
    with translate_errors():
        f = expansion.to_expansion()
    if f.is_zero:
        raise HTTPException(status_code=400, detail="Expansion has no nonzero coefficients")
    return f


@contextmanager
def translate_errors() -> Iterator[None]:
    """Input-side library errors become 400s, failed invariants 500s."""
    try:
        yield
    except InvariantViolation as exc:
        raise HTTPException(status_code=500, detail=f"Invariant violated: {exc}") from exc
    except BiharpError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
