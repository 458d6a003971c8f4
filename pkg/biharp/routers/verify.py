from fastapi import APIRouter, Depends, HTTPException

from ..config import Settings
from ..core.haar import MultiplierSequence
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..harness import workflows
from ..schemas.atomic import DecompositionRequest, VerifyAtomicOut
from ..schemas.pietsch import DominationRequest, VerifyDominationOut
from ..utils.logging import log_action

router = APIRouter(prefix="/verify", tags=["verify"])


@router.post("/domination", response_model=VerifyDominationOut)
def verify_domination(payload: DominationRequest, settings: Settings = Depends(settings_dependency)):
    """
    Domination at the given multiplier (phi_fill everywhere when none is given),
    over random multipliers and under adversarial search, plus the 2-summing check.
    """
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        phi = MultiplierSequence(
            {entry.to_rectangle(): entry.value for entry in payload.phi or []},
            fill=payload.phi_fill,
        )
        if phi.sup_norm == 0.0:
            raise HTTPException(status_code=400, detail="Multiplier is identically zero")
        result = workflows.verify_domination(
            f,
            payload.p,
            payload.grid,
            phi,
            trials=payload.trials,
            iterations=payload.iterations,
            restarts=payload.restarts,
            sequences=payload.sequences,
            seed=payload.seed,
        )
    log_action("verify_domination", "expansion", details={"p": payload.p, "worst": result.adversarial.worst_ratio})
    return result


@router.post("/atomic", response_model=VerifyAtomicOut)
def verify_atomic(payload: DecompositionRequest, settings: Settings = Depends(settings_dependency)):
    """Atomic chain, l2 atom bounds per level and the Fefferman-Stein constant."""
    f = require_depth(payload.expansion, settings)
    with translate_errors():
        result = workflows.verify_atomic(f, payload.p, payload.grid)
    log_action("verify_atomic", "expansion", details={"p": payload.p})
    return result
