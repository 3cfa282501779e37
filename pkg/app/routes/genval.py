from fastapi import APIRouter, Depends, HTTPException

from app.schemas import GenvalRequest
from app.services.commands import RunOptions, cmd_genval
from app.utils.dependencies import get_run_options, run_command, to_http_exception

router = APIRouter(
    prefix="/genval",
    tags=["Generic Valuation"]
)


@router.post("/valuation")
async def compute_valuation(
    request: GenvalRequest,
    options: RunOptions = Depends(get_run_options)
):
    """
    Naive and generic valuation of a polynomial at a Witt point,
    optionally with a witness lift and a threshold test.
    """
    try:
        report = await run_command(cmd_genval, request, options)
        return report.to_payload()
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e)
