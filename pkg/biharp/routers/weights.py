from fastapi import APIRouter, Depends

from ..config import Settings
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..harness import workflows
from ..schemas.pietsch import WeightsOut, WeightsRequest
from ..utils.logging import log_action

router = APIRouter(prefix="/weights", tags=["weights"])


@router.post("", response_model=WeightsOut)
def compute_weights(payload: WeightsRequest, settings: Settings = Depends(settings_dependency)):
    """Explicit Pietsch weights in B- or A_p-normalized form."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.weights(f, payload.p, payload.grid, payload.mode, payload.a_p)
    log_action("weights", "expansion", details={"p": payload.p, "mode": payload.mode.value})
    return result
