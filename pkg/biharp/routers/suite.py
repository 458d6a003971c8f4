from fastapi import APIRouter, Depends, HTTPException

from ..config import Settings
from ..dependencies import settings_dependency, translate_errors
from ..harness.suite import run_suite
from ..schemas.report import RunReport, SuiteConfig
from ..utils.logging import log_action

router = APIRouter(prefix="/suite", tags=["suite"])

MAX_HTTP_RUNS = 200


@router.post("", response_model=RunReport, response_model_by_alias=True)
def start_suite(config: SuiteConfig, settings: Settings = Depends(settings_dependency)):
    """
    Run a small suite synchronously. Failed invariants are listed in the report,
    not turned into an error status.
    """
    runs = sum(spec.count for spec in config.ensembles) * len(config.p_values)
    if runs > MAX_HTTP_RUNS:
        raise HTTPException(status_code=400, detail=f"Suite too large for a request ({runs} > {MAX_HTTP_RUNS}); use the CLI")
    if any(spec.max_level > settings.MAX_DEPTH for spec in config.ensembles):
        raise HTTPException(status_code=400, detail=f"maxLevel exceeds {settings.MAX_DEPTH}")
    with translate_errors():
        report = run_suite(config)
    log_action("suite", "run", details={"runs": runs, "failures": len(report.failures)})
    return report
