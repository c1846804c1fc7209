# Copyright (c) 2024.
"""Tripartite measures.

I5, the three-tangle and phi_ABC are each available by two independent
routes. The module also builds the five-term canonical three-qubit form and
evaluates the closed-form objectives behind the bounds 2/9 <= I5 and
phi_ABC <= 99/2.
"""

import logging
import math
from typing import Literal, Self, TypedDict

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, model_validator

from common.Errors import DimensionError, DomainError
from common.QState import (
    PureState,
    RealArray,
    make_pure,
    partial_trace,
    partial_transpose,
    site_set,
    trace_power,
)
from measures.Replica import i5_spec, multi_invariant
from measures.Tangle2 import require_dims, two_tangle_pure, wootters_mixed
from utils.parallel import fan_out, spawn_seeds

logger = logging.getLogger(__name__)

_I2 = np.eye(2, dtype=np.complex128)
_SHARD_SIZE = 25_000
I5_MINIMUM = 2 / 9
PHI_REDUCED_MAXIMUM = 11 / 4
PHI_MAXIMUM = 99 / 2

ArrayOrFloat = RealArray | float


class AcinParams(BaseModel):
    """lambda_0 |000> + lambda_1 e^{i phi} |100> + lambda_2 |101> + lambda_3 |110>
    + lambda_4 |111>
    """

    model_config = ConfigDict(frozen=True)

    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    @model_validator(mode="after")
    def check_domain(self) -> Self:
        if any(lam < 0 for lam in self.lambdas):
            raise ValueError("Canonical-form coefficients must be nonnegative")
        if abs(sum(lam * lam for lam in self.lambdas) - 1) > 1e-12:
            raise ValueError("Squared canonical-form coefficients must sum to 1")
        if not 0 <= self.phi < math.pi:
            raise ValueError(f"Phase {self.phi} outside [0, pi)")
        return self


class SimplexPoint(BaseModel):
    """Squares (a, b, c, d, e) of the canonical-form coefficients."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    d: float
    e: float

    @model_validator(mode="after")
    def check_simplex(self) -> Self:
        coords = (self.a, self.b, self.c, self.d, self.e)
        if any(x < 0 for x in coords):
            raise ValueError("Simplex coordinates must be nonnegative")
        if abs(sum(coords) - 1) > 1e-12:
            raise ValueError("Simplex coordinates must sum to 1")
        return self

    @property
    def s(self) -> float:
        """c + d."""
        return self.c + self.d

    @property
    def y(self) -> float:
        """sqrt(c d), which lies in [0, s/2]."""
        return math.sqrt(self.c * self.d)

    def acin(self, phi: float = 0.0) -> AcinParams:
        """Canonical-form parameters with nonnegative coefficients."""
        l0, l1, l2, l3, l4 = (
            math.sqrt(x) for x in (self.a, self.b, self.c, self.d, self.e)
        )
        return AcinParams(lambdas=(l0, l1, l2, l3, l4), phi=phi)


class BoundObjective(TypedDict):
    """Empirical extremum of a reduced bound objective."""

    objective: Literal["I5-lower", "Phi-upper"]
    extremum: float
    argument: dict[str, float]
    full_form_extremum: float
    samples: int
    seed: int


def _require_tripartite(psi: PureState) -> None:
    if psi.q != 3:
        raise DimensionError(f"Tripartite state required, got {psi.q} sites")


def i5_pt(psi: PureState, traced: int = 0) -> float:
    """Tr[(rho^Gamma)^3] of the two-site reduction left after tracing one site

    The transpose acts on the later of the two kept sites. The value does
    not depend on which site is traced.
    """
    _require_tripartite(psi)
    (traced,) = site_set([traced], 3)
    kept = [r for r in range(3) if r != traced]
    rho = partial_trace(psi, kept)
    return trace_power(partial_transpose(rho, [1]), 3).real


def i5_replica(psi: PureState) -> float:
    """I5 as the multi-invariant with permutations (id, (123), (132))."""
    _require_tripartite(psi)
    return multi_invariant(psi, i5_spec()).real


def i5_amplitudes(
    batch: npt.NDArray[np.complex128], dims: tuple[int, ...]
) -> RealArray:
    """I5 of each row of an (m, prod(dims)) array of unit tripartite states."""
    da, db, dc = dims
    t = batch.reshape(-1, da, db, dc)
    x = np.einsum("mabf,maec->mbcef", t, t.conj()).reshape(-1, db * dc, db * dc)
    return np.einsum("mij,mjk,mki->m", x, x, x).real


def three_tangle_amplitudes(batch: npt.NDArray[np.complex128]) -> RealArray:
    """Three-tangle 4|d1 - 2 d2 + 4 d3| of each row of an (m, 8) array."""
    t000, t001, t010, t011, t100, t101, t110, t111 = batch.T
    d1 = (
        t000**2 * t111**2
        + t001**2 * t110**2
        + t010**2 * t101**2
        + t100**2 * t011**2
    )
    d2 = (
        t000 * t111 * t011 * t100
        + t000 * t111 * t101 * t010
        + t000 * t111 * t110 * t001
        + t011 * t100 * t101 * t010
        + t011 * t100 * t110 * t001
        + t101 * t010 * t110 * t001
    )
    d3 = t000 * t110 * t101 * t011 + t111 * t001 * t010 * t100
    return 4 * np.abs(d1 - 2 * d2 + 4 * d3)


def three_tangle(psi: PureState) -> float:
    """Three-tangle from the 2x2x2 hyperdeterminant."""
    require_dims(psi.dims, (2, 2, 2), "three_tangle")
    return float(three_tangle_amplitudes(psi.unit_amps[np.newaxis, :])[0])


def three_tangle_ckw(psi: PureState) -> float:
    """Residual tangle tau_{A|BC} - tau_{A|B} - tau_{A|C}."""
    require_dims(psi.dims, (2, 2, 2), "three_tangle_ckw")
    return (
        two_tangle_pure(psi, [0])
        - wootters_mixed(partial_trace(psi, [0, 1]))
        - wootters_mixed(partial_trace(psi, [0, 2]))
    )


def phi_direct(psi: PureState) -> float:
    """69 - Tr[(2 rho_AB + rho_A (x) I + I (x) rho_B)^3] - 3 Tr rho_AB^2."""
    require_dims(psi.dims, (2, 2, 2), "phi_direct")
    rho_ab = partial_trace(psi, [0, 1]).mat
    rho_a = partial_trace(psi, [0]).mat
    rho_b = partial_trace(psi, [1]).mat
    x = 2 * rho_ab + np.kron(rho_a, _I2) + np.kron(_I2, rho_b)
    return 69 - trace_power(x, 3).real - 3 * trace_power(rho_ab, 2).real


def phi_amplitudes(batch: npt.NDArray[np.complex128]) -> RealArray:
    """phi_ABC of each row of an (m, 8) array of unit three-qubit states."""
    t = batch.reshape(-1, 2, 2, 2)
    tc = t.conj()
    rho_ab = np.einsum("mabc,mdec->mabde", t, tc).reshape(-1, 4, 4)
    rho_a = np.einsum("mabc,mdbc->mad", t, tc)
    rho_b = np.einsum("mabc,madc->mbd", t, tc)
    x = (
        2 * rho_ab
        + np.einsum("mad,be->mabde", rho_a, _I2).reshape(-1, 4, 4)
        + np.einsum("ad,mbe->mabde", _I2, rho_b).reshape(-1, 4, 4)
    )
    cube = np.einsum("mij,mjk,mki->m", x, x, x).real
    purity = np.einsum("mij,mji->m", rho_ab, rho_ab).real
    return 69 - cube - 3 * purity


def phi_decomposed(psi: PureState) -> float:
    """12(1 - I5) + 27 (tau_AB + tau_AC + tau_BC) + (81/2) tau_ABC."""
    require_dims(psi.dims, (2, 2, 2), "phi_decomposed")
    pairs = sum(
        wootters_mixed(partial_trace(psi, keep)) for keep in ([0, 1], [0, 2], [1, 2])
    )
    return 12 * (1 - i5_pt(psi)) + 27 * pairs + 40.5 * three_tangle(psi)


def acin_state(p: AcinParams) -> PureState:
    """Three-qubit state in the five-term canonical form."""
    l0, l1, l2, l3, l4 = p.lambdas
    amps = np.zeros(8, dtype=np.complex128)
    amps[0] = l0
    amps[4] = l1 * np.exp(1j * p.phi)
    amps[5] = l2
    amps[6] = l3
    amps[7] = l4
    return make_pure([2, 2, 2], amps)


def _i5_poly(
    a: ArrayOrFloat,
    b: ArrayOrFloat,
    c: ArrayOrFloat,
    d: ArrayOrFloat,
    e: ArrayOrFloat,
    cos_phi: ArrayOrFloat,
) -> ArrayOrFloat:
    cubes = a**3 + b**3 + c**3 + d**3 + e**3
    pairs = (
        a * a * b + a * b * b + b * b * c + b * c * c + b * b * d
        + b * d * d + c * c * e + c * e * e + d * d * e + d * e * e
    )
    triples = (
        a * b * c
        + a * b * d
        + a * c * d
        + b * c * d
        + b * c * e
        + b * d * e
        + c * d * e
    )
    phase = 6 * np.sqrt(b * c * d * e) * (b + c + d + e) * cos_phi
    return cubes + 3 * pairs + 3 * triples + phase


def _phi_poly(
    a: ArrayOrFloat,
    b: ArrayOrFloat,
    c: ArrayOrFloat,
    d: ArrayOrFloat,
    e: ArrayOrFloat,
    cos_phi: ArrayOrFloat,
) -> ArrayOrFloat:
    return (
        11 * a * (1 - a)
        - 11 * a * b
        + 8 * b * e
        - 3 * a * (c + d)
        + (8 - 4 * a) * c * d
        - 4 * (4 - a) * np.sqrt(b * c * d * e) * cos_phi
    )


def i5_closed_form(pt: SimplexPoint, phi: float) -> float:
    """I5 of the canonical-form state as a polynomial in (a, b, c, d, e)."""
    return float(_i5_poly(pt.a, pt.b, pt.c, pt.d, pt.e, math.cos(phi)))


def phi_closed_form(pt: SimplexPoint, phi: float) -> float:
    """phi_ABC of the canonical-form state as a polynomial in (a, b, c, d, e)."""
    return 18 * float(_phi_poly(pt.a, pt.b, pt.c, pt.d, pt.e, math.cos(phi)))


def i5_reduced_objective(
    a: ArrayOrFloat, b: ArrayOrFloat, s: ArrayOrFloat, y: ArrayOrFloat
) -> ArrayOrFloat:
    """I5 lower envelope at cos(phi) = -1 in the variables s = c + d, y = sqrt(cd)."""
    e = np.clip(1 - a - b - s, 0.0, None)
    return (
        1
        + 3 * (a + b) ** 2
        + 3 * b * s
        - 3 * a
        - 3 * b
        + 3 * (2 * a - 1) * y**2
        - 6 * (1 - a) * np.sqrt(b * e) * y
    )


def phi_reduced_objective(
    a: ArrayOrFloat, b: ArrayOrFloat, s: ArrayOrFloat
) -> ArrayOrFloat:
    """Upper envelope of phi_ABC / 18 with cd <= s^2/4 and cos(phi) = -1."""
    e = np.clip(1 - a - b - s, 0.0, None)
    return (
        11 * a * (1 - a)
        - 11 * a * b
        + 8 * b * e
        - 3 * a * s
        + (2 - a) * s**2
        + 2 * (4 - a) * s * np.sqrt(b * e)
    )


class _ShardExtrema(TypedDict):
    i5_value: float
    i5_point: tuple[float, ...]
    phi_value: float
    phi_point: tuple[float, ...]
    i5_full: float
    phi_full: float


def _bound_extrema(pts: npt.NDArray[np.float64], phis: RealArray) -> _ShardExtrema:
    a, b, c, d, e = pts.T
    s = c + d
    y = np.sqrt(c * d)
    i5 = np.asarray(i5_reduced_objective(a, b, s, y))
    phi = np.asarray(phi_reduced_objective(a, b, s))
    i5_full = np.asarray(_i5_poly(a, b, c, d, e, np.cos(phis)))
    phi_full = np.asarray(_phi_poly(a, b, c, d, e, np.cos(phis)))
    i_min = int(np.argmin(i5))
    i_max = int(np.argmax(phi))
    return {
        "i5_value": float(i5[i_min]),
        "i5_point": tuple(float(x) for x in pts[i_min]),
        "phi_value": float(phi[i_max]),
        "phi_point": tuple(float(x) for x in pts[i_max]),
        "i5_full": float(i5_full.min()),
        "phi_full": float(phi_full.max()),
    }


def _bound_shard(task: tuple[int, np.random.SeedSequence]) -> _ShardExtrema:
    count, seq = task
    rng = np.random.default_rng(seq)
    pts = rng.dirichlet(np.ones(5), size=count)
    phis = rng.uniform(0.0, math.pi, size=count)
    return _bound_extrema(pts, phis)


def _argument(point: tuple[float, ...]) -> dict[str, float]:
    a, b, c, d, e = point
    return {"a": a, "b": b, "c": c, "d": d, "e": e, "s": c + d, "y": math.sqrt(c * d)}


def verify_bounds(
    samples: int, seed: int, n_jobs: int = 1
) -> tuple[BoundObjective, BoundObjective]:
    """Sample the simplex and report the extrema of both reduced objectives

    Points are Dirichlet(1, ..., 1) and phases uniform on [0, pi). The two
    saturating points (1/3, 0, 1/3, 1/3, 0) and (1/2, 0, 0, 0, 1/2) are always
    evaluated. Samples are split into fixed shards seeded from one root seed
    and merged by (value, point), so n_jobs never changes the result.

    Args:
        samples: Number of random simplex points.
        seed: Root seed.
        n_jobs: Worker count.

    Raises:
        DomainError: If samples < 1

    Returns:
        The I5 minimum and the Phi maximum (Phi is phi_ABC / 18)

    """
    if samples < 1:
        raise DomainError(f"At least one sample is required, got {samples}")
    n_shards = math.ceil(samples / _SHARD_SIZE)
    counts = [_SHARD_SIZE] * (n_shards - 1) + [samples - _SHARD_SIZE * (n_shards - 1)]
    tasks = list(zip(counts, spawn_seeds(seed, n_shards), strict=True))
    shards = fan_out(_bound_shard, tasks, n_jobs)
    saturators = np.array([[1 / 3, 0, 1 / 3, 1 / 3, 0], [0.5, 0, 0, 0, 0.5]])
    shards.append(_bound_extrema(saturators, np.zeros(2)))

    i5_best = min(shards, key=lambda sh: (sh["i5_value"], sh["i5_point"]))
    phi_best = min(shards, key=lambda sh: (-sh["phi_value"], sh["phi_point"]))
    logger.info(
        f"Bounds over {samples} samples: I5 min {i5_best['i5_value']:.12f}, "
        f"Phi max {phi_best['phi_value']:.12f}"
    )
    return (
        {
            "objective": "I5-lower",
            "extremum": i5_best["i5_value"],
            "argument": _argument(i5_best["i5_point"]),
            "full_form_extremum": min(sh["i5_full"] for sh in shards),
            "samples": samples,
            "seed": seed,
        },
        {
            "objective": "Phi-upper",
            "extremum": phi_best["phi_value"],
            "argument": _argument(phi_best["phi_point"]),
            "full_form_extremum": max(sh["phi_full"] for sh in shards),
            "samples": samples,
            "seed": seed,
        },
    )
