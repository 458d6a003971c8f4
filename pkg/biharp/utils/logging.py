import json
import logging
from typing import Any, Optional

AUDIT_LOGGER = "biharp.audit"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """One stream handler on the root logger, one line per record."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_biharp", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._biharp = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(level.upper())


def log_action(
    action: str,
    resource_type: str,
    resource_id: Optional[str] = None,
    details: Optional[Any] = None,
) -> None:
    """
    Record one executed operation (CLI subcommand, HTTP request, failed
    fixture) as a JSON line on the audit logger. Never raises.
    """
    try:
        entry = {
            "action": action,
            "resource_type": resource_type,
            "resource_id": resource_id,
            "details": details,
        }
        logging.getLogger(AUDIT_LOGGER).info(json.dumps(entry, sort_keys=True, default=str))
    except Exception as e:
        logging.getLogger(__name__).warning("failed to write audit entry for %s: %s", action, e)
