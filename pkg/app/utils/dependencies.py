import asyncio
import logging
from functools import partial
from typing import Optional

from fastapi import Depends, HTTPException, Query, status
from pydantic import ValidationError

from app.config import Settings, get_settings
from app.exceptions import CapExceeded, InputValidationError, NotUnit, PrecisionExhausted, WittLatticeError
from app.services.commands import RunOptions
from app.utils.serializer import digest_payload

logger = logging.getLogger(__name__)


def get_run_options(
    seed: Optional[int] = Query(None, description="Seed for random trials (defaults to LATTICE_SEED)"),
    timings: bool = Query(False, description="Include wall-clock timings in the report"),
    settings: Settings = Depends(get_settings),
) -> RunOptions:
    """Per-request run options; timings are off by default so responses are reproducible."""
    return RunOptions.create(settings=settings, seed=seed, record_timings=timings)


def to_http_exception(exc: Exception) -> HTTPException:
    """Map the service exception families onto status codes."""
    if isinstance(exc, (InputValidationError, NotUnit, ValidationError, ValueError)):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    if isinstance(exc, PrecisionExhausted):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
    if isinstance(exc, CapExceeded):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(exc))
    if isinstance(exc, WittLatticeError):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    logger.exception("Unhandled error while running a command")
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=f"Internal error: {exc}")

async def run_command(command, request, options: RunOptions):
    """Run a blocking cmd_* in the default executor; the request body is digested as the run's input."""
    options.inputs = options.inputs or {"request": digest_payload(request)}
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, partial(command, request, options))
