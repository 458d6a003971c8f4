from fastapi import APIRouter, Depends

from ..config import Settings
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..harness import workflows
from ..schemas.expansion import NormRequest, NormsOut
from ..utils.logging import log_action

router = APIRouter(prefix="/norms", tags=["norms"])


@router.post("", response_model=NormsOut)
def compute_norms(payload: NormRequest, settings: Settings = Depends(settings_dependency)):
    """Square-function based norms of one expansion."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.norms(f, payload.p, payload.grid)
    log_action("norms", "expansion", details={"p": payload.p, "support": len(f)})
    return result
