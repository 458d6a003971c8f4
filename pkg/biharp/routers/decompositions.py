from fastapi import APIRouter, Depends

from ..config import Settings
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..harness import workflows
from ..schemas.atomic import DecompositionOut, DecompositionRequest
from ..utils.logging import log_action

router = APIRouter(prefix="/decompositions", tags=["decompositions"])


@router.post("", response_model=DecompositionOut)
def decompose(payload: DecompositionRequest, settings: Settings = Depends(settings_dependency)):
    """Atomic decomposition export: levels, |R_n^*| as exact fractions, B and the A_p sample."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.decompose(f, payload.p, payload.grid)
    log_action("decompose", "expansion", details={"p": payload.p, "levels": len(result.levels)})
    return result
