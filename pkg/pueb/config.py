"""Configuration utilities for the pueb toolkit."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import List, Literal, Set

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import UnsupportedDimensionError

Scope = Literal["single", "two_particle", "prime_power"]


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    max_dim: int = Field(49, validation_alias="PUEB_MAX_DIM")
    single_primes: List[int] = Field([3, 5, 7, 11, 13], validation_alias="PUEB_SINGLE_PRIMES")
    two_particle_primes: List[int] = Field([3, 5, 7], validation_alias="PUEB_TWO_PARTICLE_PRIMES")
    prime_powers: List[int] = Field([9, 25, 27, 49], validation_alias="PUEB_PRIME_POWERS")
    strict_tol: float = Field(1e-12, validation_alias="PUEB_STRICT_TOL")
    loose_tol: float = Field(1e-10, validation_alias="PUEB_LOOSE_TOL")
    default_seed: int = Field(7, validation_alias="PUEB_SEED")
    output_dir: Path = Field(Path("./data/out"), validation_alias="PUEB_OUTPUT_DIR")
    log_level: str = Field("INFO", validation_alias="PUEB_LOG_LEVEL")


@lru_cache()
def get_settings() -> Settings:
    """Load and cache toolkit settings."""

    load_dotenv()
    return Settings()


def supported_dims(scope: Scope, settings: Settings | None = None) -> Set[int]:
    """Return the dimensions the command line accepts for ``scope``, capped by ``max_dim``."""

    settings = settings or get_settings()
    table = {
        "single": settings.single_primes,
        "two_particle": settings.two_particle_primes,
        "prime_power": settings.prime_powers,
    }
    return {d for d in table[scope] if d <= settings.max_dim}


def check_dimension(d: int, scope: Scope, settings: Settings | None = None) -> None:
    """Reject ``d`` unless it appears in the supported-dimension table for ``scope``."""

    settings = settings or get_settings()
    if d > settings.max_dim:
        raise UnsupportedDimensionError(
            f"dimension {d} exceeds PUEB_MAX_DIM={settings.max_dim}"
        )
    allowed = supported_dims(scope, settings)
    if d not in allowed:
        raise UnsupportedDimensionError(
            f"dimension {d} is not supported for {scope} (allowed: {sorted(allowed)})"
        )
