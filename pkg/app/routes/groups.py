from fastapi import APIRouter, Depends, HTTPException

from app.schemas import GroupRequest
from app.services.groups import CATALOG, CATALOG_ALIASES
from app.services.commands import RunOptions, cmd_group
from app.utils.dependencies import get_run_options, run_command, to_http_exception

router = APIRouter(
    prefix="/groups",
    tags=["Groups"]
)


@router.post("/run")
async def run_group_probe(
    request: GroupRequest,
    options: RunOptions = Depends(get_run_options)
):
    """
    Permutation lattice O[H\\G] probes: rigid, endrank, hh1, census or double-cosets.
    """
    try:
        report = await run_command(cmd_group, request, options)
        return report.to_payload()
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e)


@router.get("/catalog")
async def list_catalog():
    """Named groups accepted in place of generator lists."""
    return {"groups": CATALOG, "aliases": CATALOG_ALIASES}
