from __future__ import annotations

from pathlib import Path
from typing import Callable, Iterator, Optional

import pytest

from pueb.config import Settings, get_settings
from pueb.states import DensityMatrix
from pueb.tomography.reconstruction import random_density_matrix


@pytest.fixture(autouse=True)
def fresh_settings() -> Iterator[None]:
    """Every test starts from settings read from its own environment."""

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings_factory(monkeypatch: pytest.MonkeyPatch) -> Callable[..., Settings]:
    """Set PUEB_* environment variables and return the reloaded settings."""

    def factory(**env: object) -> Settings:
        for name, value in env.items():
            monkeypatch.setenv(name, str(value))
        get_settings.cache_clear()
        return get_settings()

    return factory


@pytest.fixture
def rho_factory() -> Callable[..., DensityMatrix]:
    """Seeded random density matrices; rank 1 is pure, the default is full rank."""

    def factory(dim: int, seed: int, rank: Optional[int] = None) -> DensityMatrix:
        return random_density_matrix(dim, rank=rank, seed=seed)

    return factory


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    path = tmp_path / "out"
    path.mkdir()
    return path
