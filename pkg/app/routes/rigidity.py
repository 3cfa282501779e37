from fastapi import APIRouter, Depends, HTTPException

from app.schemas import RigidRequest
from app.services.commands import RunOptions, cmd_rigid
from app.utils.dependencies import get_run_options, run_command, to_http_exception

router = APIRouter(
    prefix="/rigidity",
    tags=["Rigidity"]
)


@router.post("/check")
async def check_rigidity(
    request: RigidRequest,
    options: RunOptions = Depends(get_run_options)
):
    """
    Decide rigidity of a lattice and report its Ext¹(L, L) invariants.
    Precision failures are retried once at doubled precision.
    """
    try:
        report = await run_command(cmd_rigid, request, options)
        return report.to_payload()
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e)
