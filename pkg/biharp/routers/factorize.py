from fastapi import APIRouter, Depends

from ..config import Settings
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..harness import workflows
from ..schemas.factorize import FactorizeRequest, FactorPairOut, X0Out, X0Request
from ..utils.logging import log_action

router = APIRouter(tags=["factorize"])


@router.post("/factorize", response_model=FactorPairOut)
def factorize(payload: FactorizeRequest, settings: Settings = Depends(settings_dependency)):
    """Factor |f| = |x|^(1-theta) |y|^theta from the Pietsch weights, theta = 2 - 2/p."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.factorize(f, payload.p, payload.grid, payload.budget, payload.seed)
    log_action("factorize", "expansion", details={"p": payload.p, "defect": result.defect})
    return result


@router.post("/x0", response_model=X0Out)
def estimate_x0(payload: X0Request, settings: Settings = Depends(settings_dependency)):
    """Lower and upper estimates of the X0 quantity of an expansion."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.x0(f, payload.target_p, payload.theta, payload.grid, payload.budget, payload.seed)
    log_action("x0", "expansion", details={"target_p": payload.target_p, "lower": result.lower})
    return result
