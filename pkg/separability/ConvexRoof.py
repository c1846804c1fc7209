# Copyright (c) 2024.
"""Convex-roof estimates of pure-state measures for mixed states.

A rank-r state rho = sum_k mu_k |e_k><e_k| is decomposed into m pure states
|psi~_l> = sum_k V_lk sqrt(mu_k) |e_k> with V an m x r matrix of orthonormal
columns. The average sum_l p_l f(psi_l) is minimized over V with restarts;
every value found is an upper bound on the convex roof.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, TypedDict

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize

from common.EnvManager import DEFAULTS
from common.Errors import DimensionError, DomainError
from common.QState import (
    ComplexArray,
    DensityMatrix,
    RealArray,
    hermitian_eig,
    make_pure,
)
from common.Reports import MeasureEntry, Provenance
from measures.Replica import ReplicaSpec, multi_invariant
from measures.Tangle2 import tangle_amplitudes
from measures.Tangle3 import i5_amplitudes, phi_amplitudes, three_tangle_amplitudes
from utils.parallel import fan_out, spawn_seeds

logger = logging.getLogger(__name__)

RoofMeasure = Literal[
    "phi", "one_minus_i5", "one_minus_absZ", "two_tangle", "three_tangle"
]
PureObjective = Callable[[ComplexArray], RealArray]

_RANK_TOL = 1e-10
_WEIGHT_FLOOR = 1e-14


class RoofOptions(BaseModel):
    """Optimizer budget and seeding."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default=DEFAULTS.roof_restarts, ge=1)
    iters: int = Field(default=DEFAULTS.roof_iters, ge=1)
    seed: int = DEFAULTS.seed
    tol: float = Field(default=DEFAULTS.roof_tol, gt=0)
    method: str = DEFAULTS.roof_method
    ensemble_sizes: tuple[int, ...] | None = None
    replica: ReplicaSpec | None = None
    n_jobs: int = DEFAULTS.n_jobs
    max_rank: int = 8


class RoofEstimate(BaseModel):
    """Best decomposition average found, with its provenance."""

    measure: str
    value: float
    rank: int
    ensemble_size: int
    ensemble_cap: int
    restarts: int
    seed: int
    provenance: Provenance
    budget_exhausted: bool = False
    trace: list[tuple[int, int, int, float]] = Field(default_factory=list)

    def entry(self) -> MeasureEntry:
        """MeasureReport entry for this estimate."""
        if self.provenance == "closed-form":
            return MeasureEntry(value=self.value)
        return MeasureEntry(
            value=self.value,
            provenance="optimizer",
            restarts=self.restarts,
            seed=self.seed,
            budget_exhausted=self.budget_exhausted,
        )


@dataclass(frozen=True)
class DecompositionAnsatz:
    """Ensemble size m and the m x r isometry mixing the eigenvectors."""

    m: int
    isometry: ComplexArray

    @classmethod
    def from_parameters(cls, x: RealArray, m: int, r: int) -> "DecompositionAnsatz":
        """Polar-orthonormalize the complex m x r matrix packed in x."""
        z = (x[: m * r] + 1j * x[m * r :]).reshape(m, r)
        w, u = np.linalg.eigh(z.conj().T @ z)
        inv_sqrt = (u / np.sqrt(np.clip(w, 1e-300, None))) @ u.conj().T
        return cls(m, z @ inv_sqrt)

    @staticmethod
    def initial_parameters(m: int, r: int) -> RealArray:
        """Parameters of the eigen-decomposition itself (V = [I; 0])."""
        z = np.zeros((m, r))
        z[:r, :r] = np.eye(r)
        return np.concatenate([z.reshape(-1), np.zeros(m * r)])

    def ensemble(
        self, eigenvalues: RealArray, eigenvectors: ComplexArray
    ) -> tuple[RealArray, ComplexArray]:
        """Weights p_l and unit states psi_l (rows) of the decomposition."""
        unnorm = (self.isometry * np.sqrt(eigenvalues)) @ eigenvectors.T
        p = np.sum(np.abs(unnorm) ** 2, axis=1)
        states = unnorm / np.sqrt(np.maximum(p, 1e-300))[:, np.newaxis]
        return p, states

    def reconstruct(
        self, eigenvalues: RealArray, eigenvectors: ComplexArray
    ) -> ComplexArray:
        """sum_l p_l |psi_l><psi_l|."""
        p, states = self.ensemble(eigenvalues, eigenvectors)
        return np.einsum("l,li,lj->ij", p, states, states.conj())


def _absz_objective(dims: tuple[int, ...], replica: ReplicaSpec) -> PureObjective:
    power = 2 / replica.n_replicas

    def objective(batch: ComplexArray) -> RealArray:
        values = [
            abs(multi_invariant(make_pure(dims, row, allow_unnormalized=True), replica))
            for row in batch
        ]
        return np.clip(1 - np.array(values), 0.0, None) ** power

    return objective


def pure_objective(
    measure: RoofMeasure, dims: tuple[int, ...], replica: ReplicaSpec | None = None
) -> PureObjective:
    """Vectorized pure-state measure for rows of unit amplitude vectors

    Raises:
        DimensionError: If the measure is not defined for dims
        DomainError: If one_minus_absZ is requested without a replica spec

    """
    if measure in {"phi", "three_tangle"} and dims != (2, 2, 2):
        raise DimensionError(f"{measure} needs three qubits, got {list(dims)}")
    if measure == "two_tangle" and dims != (2, 2):
        raise DimensionError(f"two_tangle needs two qubits, got {list(dims)}")
    match measure:
        case "phi":
            return phi_amplitudes
        case "three_tangle":
            return three_tangle_amplitudes
        case "two_tangle":
            return tangle_amplitudes
        case "one_minus_i5":
            if len(dims) != 3:
                raise DimensionError(
                    f"one_minus_i5 needs three sites, got {list(dims)}"
                )
            return lambda batch: np.clip(1 - i5_amplitudes(batch, dims), 0.0, None) ** (
                2 / 3
            )
        case "one_minus_absZ":
            if replica is None:
                raise DomainError("one_minus_absZ needs a replica specification")
            if len(replica.perms) != len(dims):
                raise DimensionError("Replica spec does not match the site count")
            return _absz_objective(dims, replica)


@dataclass(frozen=True)
class _RoofProblem:
    eigenvalues: RealArray
    eigenvectors: ComplexArray
    objective: PureObjective
    m: int
    iters: int
    tol: float
    method: str

    @property
    def r(self) -> int:
        return self.eigenvalues.size

    def average(self, x: RealArray) -> float:
        ansatz = DecompositionAnsatz.from_parameters(x, self.m, self.r)
        p, states = ansatz.ensemble(self.eigenvalues, self.eigenvectors)
        keep = p > _WEIGHT_FLOOR
        return float(np.dot(p[keep], self.objective(states[keep])))


class _RestartResult(TypedDict):
    value: float
    index: int
    m: int
    exhausted: bool
    trace: list[float]


def _run_restart(
    task: tuple[_RoofProblem, int, np.random.SeedSequence],
) -> _RestartResult:
    problem, index, seq = task
    m, r = problem.m, problem.r
    if index == 0:
        x0 = DecompositionAnsatz.initial_parameters(m, r)
    else:
        x0 = np.random.default_rng(seq).standard_normal(2 * m * r)
    best = [problem.average(x0)]
    trace: list[float] = [best[0]]

    def track(xk: RealArray) -> None:
        best[0] = min(best[0], problem.average(xk))
        trace.append(best[0])

    res = minimize(
        problem.average,
        x0,
        method=problem.method,
        tol=problem.tol,
        callback=track,
        options={"maxiter": problem.iters},
    )
    value = min(best[0], float(res.fun))
    if value < trace[-1]:
        trace.append(value)
    exhausted = int(getattr(res, "nit", 0)) >= problem.iters and not res.success
    return {
        "value": value,
        "index": index,
        "m": m,
        "exhausted": exhausted,
        "trace": trace,
    }


def rank_and_spectrum(rho: DensityMatrix) -> tuple[RealArray, ComplexArray]:
    """Nonzero eigenvalues (renormalized) and their eigenvectors."""
    spec = hermitian_eig(rho.mat)
    keep = spec.eigenvalues > _RANK_TOL
    mu = spec.eigenvalues[keep]
    return mu / mu.sum(), spec.eigenvectors[:, keep]


def convex_roof(
    rho: DensityMatrix,
    measure: RoofMeasure,
    opts: RoofOptions | None = None,
) -> RoofEstimate:
    """Upper bound on the convex roof of a pure-state measure

    Restart 0 starts from the eigen-decomposition, the others from random
    isometries; each restart runs scipy.optimize.minimize and keeps a
    best-so-far trace. Every ensemble size m in opts.ensemble_sizes (by
    default r..2r) gets the full set of restarts; results are merged by
    (value, restart index, m).

    Args:
        rho: Mixed state of rank at most opts.max_rank.
        measure: Pure-state measure to extend.
        opts: Optimizer options; defaults from the settings.

    Raises:
        DomainError: If the rank exceeds opts.max_rank

    Returns:
        The estimate; exact (closed-form provenance) when rho is pure

    """
    opts = opts or RoofOptions()
    objective = pure_objective(measure, rho.dims, opts.replica)
    mu, vecs = rank_and_spectrum(rho)
    r = mu.size
    if r > opts.max_rank:
        raise DomainError(f"Rank {r} exceeds the convex-roof limit {opts.max_rank}")
    if r == 1:
        value = float(objective(vecs.T)[0])
        return RoofEstimate(
            measure=measure,
            value=max(0.0, value),
            rank=1,
            ensemble_size=1,
            ensemble_cap=1,
            restarts=0,
            seed=opts.seed,
            provenance="closed-form",
        )

    sizes = opts.ensemble_sizes or tuple(range(r, 2 * r + 1))
    if any(not r <= m <= 2 * r for m in sizes):
        raise DomainError(f"Ensemble sizes {sizes} must lie in [{r}, {2 * r}]")
    seeds = spawn_seeds(opts.seed, opts.restarts)
    tasks = [
        (
            _RoofProblem(mu, vecs, objective, m, opts.iters, opts.tol, opts.method),
            index,
            seeds[index],
        )
        for m in sizes
        for index in range(opts.restarts)
    ]
    results = fan_out(_run_restart, tasks, opts.n_jobs)
    best = min(results, key=lambda res: (res["value"], res["index"], res["m"]))
    exhausted = any(res["exhausted"] for res in results)
    if exhausted:
        logger.warning(f"Convex roof of {measure}: iteration budget exhausted")
    trace = [
        (res["m"], res["index"], iteration, value)
        for res in results
        for iteration, value in enumerate(res["trace"])
    ]
    logger.info(
        f"Convex roof of {measure} (rank {r}, m={best['m']}): {best['value']:.10f} "
        f"over {opts.restarts} restart(s) x {len(sizes)} ensemble size(s)"
    )
    return RoofEstimate(
        measure=measure,
        value=max(0.0, best["value"]),
        rank=r,
        ensemble_size=best["m"],
        ensemble_cap=max(sizes),
        restarts=opts.restarts,
        seed=opts.seed,
        provenance="optimizer",
        budget_exhausted=exhausted,
        trace=trace,
    )


def write_trace_csv(estimate: RoofEstimate, path: str | Path) -> None:
    """Write the trace as ensemble_size,restart,iteration,objective rows."""
    frame = pd.DataFrame(
        estimate.trace,
        columns=["ensemble_size", "restart", "iteration", "objective"],
    )
    frame.to_csv(path, index=False)


def roof_weights_check(
    ansatz: DecompositionAnsatz, eigenvalues: RealArray, eigenvectors: ComplexArray
) -> float:
    """Max-entry error of the decomposition against the spectral form of rho."""
    target = (eigenvectors * eigenvalues) @ eigenvectors.conj().T
    return float(np.max(np.abs(ansatz.reconstruct(eigenvalues, eigenvectors) - target)))


def isometry_defect(ansatz: DecompositionAnsatz) -> float:
    """Max-entry deviation of V^dagger V from the identity."""
    v = ansatz.isometry
    return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
