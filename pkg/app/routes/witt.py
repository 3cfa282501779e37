from fastapi import APIRouter, Depends, HTTPException

from app.schemas import WittRequest
from app.services.commands import RunOptions, cmd_witt
from app.utils.dependencies import get_run_options, run_command, to_http_exception

router = APIRouter(
    prefix="/witt",
    tags=["Witt Arithmetic"]
)


@router.post("/run")
async def run_witt(
    request: WittRequest,
    options: RunOptions = Depends(get_run_options)
):
    """
    Witt digit arithmetic, Teichmüller lifts, digit conversions or ghost polynomials.
    The digit path is checked against the ring path for add and mul.
    """
    try:
        report = await run_command(cmd_witt, request, options)
        return report.to_payload()
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e)
