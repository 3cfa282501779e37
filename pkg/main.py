"""
Witt Lattice Lab - HTTP API
FastAPI mirror of the witt-lattice command line
"""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI

from app.config import get_settings
from app.routes import census, genval, groups, rigidity, witt


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan events for the FastAPI application.
    Configures logging once at startup.
    """
    settings = get_settings()
    logging.basicConfig(level=settings.effective_log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    yield


app = FastAPI(
    title="Witt Lattice Lab API",
    description="Exact computations with lattices over p-adic orders",
    version="1.0.0",
    lifespan=lifespan
)

# Include routers
app.include_router(witt.router)
app.include_router(rigidity.router)
app.include_router(census.router)
app.include_router(genval.router)
app.include_router(groups.router)


@app.get("/api/health", tags=["Health"])
async def health_check():
    """Health check endpoint for API."""
    return {"message": f"{get_settings().app_name} API is running", "status": "healthy"}
