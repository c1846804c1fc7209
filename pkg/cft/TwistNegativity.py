# Copyright (c) 2024.
"""Large-c third-order negativity of two adjacent intervals.

Three twist operators of equal dimension 2c/9 sit at z1, z2, z3; their
three-point function, with the holographic OPE coefficient, gives the
logarithm of the negativity moment. Everything stays in log space.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from typing import Self, TypedDict

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from common.Errors import DomainError

logger = logging.getLogger(__name__)

_TRIANGLE_SLACK = 1e-12
LN_THREE_QUARTERS = math.log(3 / 4)


class CFTConfig(BaseModel):
    """Central charge, three distinct real insertion points and the UV cutoff."""

    model_config = ConfigDict(frozen=True)

    c: float = Field(gt=0)
    z1: float = 0.0
    z2: float = 1.0
    z3: float = 2.0
    eps: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def check_points(self) -> Self:
        if len({self.z1, self.z2, self.z3}) != 3:
            raise ValueError("Insertion points must be pairwise distinct")
        return self

    @property
    def points(self) -> tuple[float, float, float]:
        """(z1, z2, z3)."""
        return self.z1, self.z2, self.z3


class Breakdown(TypedDict):
    """Components of ln Tr (rho^Gamma)^3."""

    twist_dimension: float
    ln_ope: float
    ln_distance: float
    ln_tr_neg3: float


def twist_dimension(c: float) -> float:
    """(c/12)(3 - 1/3) = 2c/9

    Raises:
        DomainError: If c <= 0

    """
    if c <= 0:
        raise DomainError(f"Central charge must be positive, got {c}")
    return c / 12 * (3 - 1 / 3)


def _check_triangle(d1: float, d2: float, d3: float) -> None:
    if min(d1, d2, d3) <= 0:
        raise DomainError(f"Dimensions must be positive, got {(d1, d2, d3)}")
    for a, b, c in ((d1, d2, d3), (d2, d3, d1), (d3, d1, d2)):
        if a + b - c <= _TRIANGLE_SLACK:
            raise DomainError(
                f"Dimensions {(d1, d2, d3)} violate the triangle inequality"
            )


def ope_coeff_log(d1: float, d2: float, d3: float) -> float:
    """Holographic ln C_123 of three heavy operators

    Raises:
        DomainError: Unless the dimensions satisfy the strict triangle
            inequalities

    """
    _check_triangle(d1, d2, d3)
    total = d1 + d2 + d3
    value = 0.0
    for a, b, c in ((d1, d2, d3), (d2, d3, d1), (d3, d1, d2)):
        value += a / 2 * math.log((a + b - c) * (a + c - b) / (b + c - a))
    value += total / 2 * (math.log(total) - math.log(4))
    value -= d1 * math.log(d1) + d2 * math.log(d2) + d3 * math.log(d3)
    return value


def ope_coeff_log_terms(d1: float, d2: float, d3: float) -> dict[str, float]:
    """ln C_123 accumulated term by term from separated logarithms

    Returns:
        Every additive term keyed by a label, plus their fsum under "total"

    """
    _check_triangle(d1, d2, d3)
    dims = (d1, d2, d3)
    terms: dict[str, float] = {}
    for i, j, k in itertools.permutations(range(3)):
        if j > k:
            continue
        a, b, c = dims[i], dims[j], dims[k]
        terms[f"pair_{i + 1}"] = (a / 2) * (
            math.log(a + b - c) + math.log(a + c - b) - math.log(b + c - a)
        )
    total = math.fsum(dims)
    terms["sum"] = (total / 2) * math.log(total / 4)
    for i, d in enumerate(dims):
        terms[f"self_{i + 1}"] = -d * math.log(d)
    terms["total"] = math.fsum(terms.values())
    return terms


def three_point_log(cfg: CFTConfig, d1: float, d2: float, d3: float) -> float:
    """ln of the three-point function with the holographic OPE coefficient."""
    z1, z2, z3 = cfg.points
    distances = (
        (abs(z1 - z2), d1 + d2 - d3),
        (abs(z2 - z3), d2 + d3 - d1),
        (abs(z3 - z1), d3 + d1 - d2),
    )
    value = ope_coeff_log(d1, d2, d3)
    for dist, power in distances:
        value -= power * (math.log(dist) - math.log(cfg.eps))
    return value


def _ln_distance(cfg: CFTConfig) -> float:
    z1, z2, z3 = cfg.points
    return 2 * (
        math.log(abs(z1 - z2)) + math.log(abs(z2 - z3)) + math.log(abs(z3 - z1))
    ) - 6 * math.log(cfg.eps)


def ln_tr_neg3(cfg: CFTConfig) -> float:
    """-(c/9) ln(|z12|^2 |z23|^2 |z31|^2 / eps^6) + (c/3) ln(3/4)."""
    return -cfg.c / 9 * _ln_distance(cfg) + cfg.c / 3 * LN_THREE_QUARTERS


def breakdown(cfg: CFTConfig) -> Breakdown:
    """Twist dimension, ln C_123, the distance logarithm and the result."""
    delta = twist_dimension(cfg.c)
    return {
        "twist_dimension": delta,
        "ln_ope": ope_coeff_log(delta, delta, delta),
        "ln_distance": _ln_distance(cfg),
        "ln_tr_neg3": ln_tr_neg3(cfg),
    }


def sweep(
    cs: Sequence[float],
    eps_values: Sequence[float],
    points: tuple[float, float, float] = (0.0, 1.0, 2.0),
) -> pd.DataFrame:
    """ln_tr_neg3 over the grid cs x eps_values at fixed points."""
    z1, z2, z3 = points
    rows = []
    for c, eps in itertools.product(cs, eps_values):
        cfg = CFTConfig(c=c, z1=z1, z2=z2, z3=z3, eps=eps)
        rows.append(
            {
                "c": c,
                "z1": z1,
                "z2": z2,
                "z3": z3,
                "eps": eps,
                "twist_dimension": twist_dimension(c),
                "ln_tr_neg3": ln_tr_neg3(cfg),
            }
        )
    logger.info(f"CFT sweep over {len(rows)} grid points")
    return pd.DataFrame(rows)
