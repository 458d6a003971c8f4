import json

from fastapi import APIRouter, Depends, HTTPException, UploadFile
from pydantic import ValidationError

from ..config import Settings
from ..core.haar import h2_norm_coeff, hp_norm
from ..dependencies import require_depth, settings_dependency, translate_errors
from ..schemas.expansion import ExpansionSummary, HaarExpansionIn
from ..utils.logging import log_action

router = APIRouter(prefix="/expansions", tags=["expansions"])

MAX_UPLOAD_BYTES = 8 * 1024 * 1024


@router.post("/upload", response_model=ExpansionSummary)
async def upload_expansion(file: UploadFile, settings: Settings = Depends(settings_dependency)):
    """Validate an uploaded HaarExpansion JSON file and summarize it."""
    if not file.filename:
        raise HTTPException(status_code=400, detail="File name missing")
    content = await file.read()
    if len(content) > MAX_UPLOAD_BYTES:
        raise HTTPException(status_code=413, detail="Expansion file too large")
    try:
        document = HaarExpansionIn.model_validate(json.loads(content))
    except (ValueError, ValidationError) as exc:
        raise HTTPException(status_code=400, detail=f"Invalid expansion file: {exc}") from exc

    f = require_depth(document, settings)
    with translate_errors():
        summary = ExpansionSummary(
            filename=file.filename,
            max_level=f.max_level,
            support_size=len(f),
            h1_norm=hp_norm(f, 1.0),
            h2_norm=h2_norm_coeff(f),
        )
    log_action("upload", "expansion", file.filename, {"support": len(f)})
    return summary
