from fastapi import APIRouter, Depends, HTTPException

from app.schemas import CensusRequest
from app.services.commands import RunOptions, cmd_census
from app.utils.dependencies import get_run_options, run_command, to_http_exception

router = APIRouter(
    prefix="/census",
    tags=["Census"]
)


@router.post("/run")
async def run_census(
    request: CensusRequest,
    options: RunOptions = Depends(get_run_options)
):
    """
    Enumerate sublattices up to max_colength and group them into isomorphism classes.
    """
    try:
        report = await run_command(cmd_census, request, options)
        return report.to_payload()
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e)
