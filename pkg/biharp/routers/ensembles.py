from fastapi import APIRouter, Depends, HTTPException

from ..config import Settings
from ..dependencies import settings_dependency, translate_errors
from ..harness.ensembles import generate
from ..schemas.ensemble import EnsembleOut, EnsembleSpec
from ..schemas.expansion import HaarExpansionIn
from ..utils.logging import log_action

router = APIRouter(prefix="/ensembles", tags=["ensembles"])

MAX_HTTP_FIXTURES = 1000


@router.post("", response_model=EnsembleOut)
def create_ensemble(spec: EnsembleSpec, settings: Settings = Depends(settings_dependency)):
    """Generate a seeded ensemble; identical specs give identical expansions."""
    if spec.max_level > settings.MAX_DEPTH:
        raise HTTPException(status_code=400, detail=f"maxLevel {spec.max_level} exceeds {settings.MAX_DEPTH}")
    if spec.count > MAX_HTTP_FIXTURES:
        raise HTTPException(status_code=400, detail=f"At most {MAX_HTTP_FIXTURES} fixtures per request")
    with translate_errors():
        expansions = generate(spec)
    log_action("generate", "ensemble", str(spec.seed), {"kind": spec.kind.value, "count": spec.count})
    return EnsembleOut(spec=spec, expansions=[HaarExpansionIn.from_expansion(f) for f in expansions])
