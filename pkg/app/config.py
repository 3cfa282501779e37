"""
Runtime settings for the CLI and the HTTP API.
Every field reads a LATTICE_* environment variable or .env entry and falls
back to the defaults in app.constants.
"""
from pydantic_settings import BaseSettings
from pydantic import Field
from functools import lru_cache

from app.constants import (
    DEFAULT_PRECISION,
    DEFAULT_RESIDUE_DEGREE,
    DEFAULT_SEED,
    GROUP_ORDER_CAP,
    ENVELOPING_DIMENSION_CAP,
    ENUMERATION_LIMIT,
    ISOMORPHISM_FAILURE_BITS,
)


class Settings(BaseSettings):
    """Precision, seed, resource caps and reporting switches."""

    # Arithmetic defaults
    precision: int = Field(default=DEFAULT_PRECISION, ge=1, alias="LATTICE_PRECISION")
    residue_degree: int = Field(default=DEFAULT_RESIDUE_DEGREE, ge=1, alias="LATTICE_RESIDUE_DEGREE")
    seed: int = Field(default=DEFAULT_SEED, alias="LATTICE_SEED")

    # Resource caps
    group_cap: int = Field(default=GROUP_ORDER_CAP, ge=1, alias="LATTICE_GROUP_CAP")
    enveloping_cap: int = Field(default=ENVELOPING_DIMENSION_CAP, ge=1, alias="LATTICE_ENVELOPING_CAP")
    enumeration_limit: int = Field(default=ENUMERATION_LIMIT, ge=1, alias="LATTICE_ENUMERATION_LIMIT")
    failure_bits: int = Field(default=ISOMORPHISM_FAILURE_BITS, ge=1, alias="LATTICE_FAILURE_BITS")

    # Reporting
    app_name: str = "Witt Lattice Lab"
    record_timings: bool = Field(default=True, alias="LATTICE_RECORD_TIMINGS")
    log_level: str = Field(default="WARNING", alias="LATTICE_LOG_LEVEL")
    debug: bool = Field(default=False, alias="DEBUG")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False

    @property
    def effective_log_level(self) -> str:
        """DEBUG overrides LATTICE_LOG_LEVEL."""
        return "DEBUG" if self.debug else self.log_level.upper()


@lru_cache()
def get_settings() -> Settings:
    """Settings are read once per process; tests clear the cache to override them."""
    return Settings()
