# Copyright (c) 2024.
"""Methods for standardizing configuration management."""

import logging
from pathlib import Path
from typing import Literal, get_args

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict

logger = logging.getLogger(__name__)

ConfigKeys = Literal[
    "SEED",
    "TOL_NORM",
    "TOL_HERMITIAN",
    "TOL_PSD",
    "MAX_TOTAL_DIM",
    "REPLICA_WORK_LIMIT",
    "JACOBI_THRESHOLD",
    "JACOBI_MAX_SWEEPS",
    "EIG_METHOD",
    "ROOF_RESTARTS",
    "ROOF_ITERS",
    "ROOF_TOL",
    "ROOF_METHOD",
    "SEPARABLE_TOL",
    "ENTANGLED_MARGIN",
    "CRITERION_TOL",
    "N_JOBS",
]

VARS: list[ConfigKeys] = list(get_args(ConfigKeys))

EigMethod = Literal["lapack", "jacobi"]


class Settings(BaseModel):
    """Numerical tolerances, budgets and seeds shared by every module."""

    model_config = ConfigDict(frozen=True)

    seed: int = 0xC0FFEE
    tol_norm: float = 1e-12
    tol_hermitian: float = 1e-10
    tol_psd: float = 1e-10
    max_total_dim: int = 4096
    replica_work_limit: int = 2**20
    jacobi_threshold: float = 1e-14
    jacobi_max_sweeps: int = 100
    eig_method: EigMethod = "lapack"
    roof_restarts: int = 32
    roof_iters: int = 500
    roof_tol: float = 1e-8
    roof_method: str = "BFGS"
    separable_tol: float = 1e-6
    entangled_margin: float = 1e-3
    criterion_tol: float = 1e-9
    n_jobs: int = 1


DEFAULTS = Settings()


def getenv(path: str | Path | None = None) -> Settings:
    """Load run settings, optionally overridden from a dotenv-format file

    Only the given file is read; the process environment is never consulted.

    Args:
        path: Optional path to a file of KEY=value lines using ConfigKeys names.

    Raises:
        ValueError: If the file is missing or names an unknown key

    Returns:
        The validated settings

    """
    if path is None:
        return DEFAULTS
    if not Path(path).is_file():
        raise ValueError(f"Missing configuration file: {path}")
    overrides: dict[str, str] = {}
    for key, val in dotenv_values(path).items():
        if key not in VARS:
            raise ValueError(f"Unknown configuration key: {key}")
        if val is None:
            continue
        overrides[key.lower()] = val
    logger.info(f"Loaded {len(overrides)} setting override(s) from {path}")
    return Settings.model_validate({**DEFAULTS.model_dump(), **overrides})
