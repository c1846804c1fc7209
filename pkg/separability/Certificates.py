# Copyright (c) 2024.
"""Separability certificates: PPT, the rank-two coherence lemma, GHZ
rigidity detection and the four-qubit five-conditions scan.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, TypedDict

import numpy as np
from pydantic import BaseModel

from common.EnvManager import DEFAULTS
from common.Errors import DimensionError, DomainError, SiteError
from common.QState import (
    ComplexArray,
    DensityMatrix,
    PureState,
    Seed,
    apply_local_unitaries,
    hermitian_eig,
    make_pure,
    partial_trace,
    partial_transpose,
    schmidt,
    site_set,
)
from measures.Tangle2 import require_dims
from separability.ConvexRoof import RoofOptions, convex_roof

logger = logging.getLogger(__name__)

PPT_TOL = 1e-10
_GAP_TOL = 1e-6


class PPTResult(TypedDict):
    """Partial-transpose test across one bipartition."""

    is_ppt: bool
    min_eigenvalue: float
    decisive: bool


def ppt_check(rho: DensityMatrix, cut: list[int] | tuple[int, ...]) -> PPTResult:
    """Smallest eigenvalue of the partial transpose on the cut sites

    The test is necessary and sufficient for separability only when the
    bipartition is 2x2 or 2x3; `decisive` records whether that holds.

    Raises:
        SiteError: If the cut is empty or contains every site

    """
    cut_t = site_set(cut, rho.q)
    if not cut_t or len(cut_t) == rho.q:
        raise SiteError(f"Cut {cut_t} is trivial for {rho.q} sites")
    d_cut = math.prod(rho.dims[r] for r in cut_t)
    d_rest = rho.dim // d_cut
    lowest = float(hermitian_eig(partial_transpose(rho, cut_t)).eigenvalues[-1])
    return {
        "is_ppt": lowest >= -PPT_TOL,
        "min_eigenvalue": lowest,
        "decisive": sorted((d_cut, d_rest)) in ([2, 2], [2, 3]),
    }


def coherence_state(mu0: float, mu1: float, s: complex) -> ComplexArray:
    """mu0 |00><00| + mu1 |11><11| + s |00><11| + s* |11><00|."""
    if mu0 < 0 or mu1 < 0:
        raise DomainError(f"Populations must be nonnegative, got {mu0}, {mu1}")
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0], m[3, 3] = mu0, mu1
    m[0, 3], m[3, 0] = s, np.conj(s)
    return m


def rank2_coherence_sep(
    mu0: float, mu1: float, s: complex, tol: float = PPT_TOL
) -> bool:
    """Whether the coherence state is separable

    Its partial transpose has eigenvalues {mu0, mu1, |s|, -|s|}, so it is
    separable exactly when s vanishes.
    """
    pt = partial_transpose(coherence_state(mu0, mu1, s), [1], dims=(2, 2))
    lowest = float(hermitian_eig(pt).eigenvalues[-1])
    return lowest >= -tol


RigidityOutcome = Literal["detected", "absent", "inconclusive"]


@dataclass(frozen=True)
class GHZForm:
    """sum_j lambda_j |j...j> (j < rank) carried by one unitary per site."""

    dims: tuple[int, ...]
    rank: int
    weights: ComplexArray
    local_unitaries: tuple[ComplexArray, ...]

    def canonical(self) -> PureState:
        """The diagonal state before the local unitaries."""
        amps = np.zeros(math.prod(self.dims), dtype=np.complex128)
        for j, lam in enumerate(self.weights):
            amps[np.ravel_multi_index((j,) * len(self.dims), self.dims)] = lam
        return make_pure(self.dims, amps)

    def to_state(self) -> PureState:
        """U_1 (x) ... (x) U_q applied to the canonical state."""
        return apply_local_unitaries(self.canonical(), self.local_unitaries)


@dataclass(frozen=True)
class RigidityResult:
    """Outcome of GHZ rigidity detection."""

    outcome: RigidityOutcome
    form: GHZForm | None
    off_diagonal_mass: float
    fidelity_deficit: float = 1.0


class ProductTerm(TypedDict):
    """Weight and one unit vector per kept site."""

    weight: float
    factors: list[ComplexArray]


def _site_bases(
    t: ComplexArray, rng: np.random.Generator
) -> tuple[list[ComplexArray], float]:
    """One unitary per site from randomly contracted neighbour matrices."""
    q = t.ndim
    bases: list[ComplexArray] = []
    min_gap = math.inf
    for r in range(q):
        s = (r + 1) % q
        mat = t
        for k in reversed(range(q)):
            if k in (r, s):
                continue
            g = rng.standard_normal(t.shape[k]) + 1j * rng.standard_normal(t.shape[k])
            mat = np.tensordot(mat, g, axes=([k], [0]))
        if r > s:
            mat = mat.T
        u, sv, _ = np.linalg.svd(mat)
        live = sv[sv > 1e-12 * sv[0]]
        if live.size > 1:
            min_gap = min(min_gap, float(np.min(-np.diff(live)) / live[0]))
        bases.append(u)
    return bases, min_gap


def _matching(weights: np.ndarray, floor: float) -> list[tuple[int, ...]] | None:
    """Significant entries, heaviest first, if no two share a site index."""
    support = [tuple(int(i) for i in idx) for idx in np.argwhere(weights > floor)]
    support.sort(key=lambda idx: (-weights[idx], idx))
    for r in range(weights.ndim):
        coords = [idx[r] for idx in support]
        if len(set(coords)) != len(coords):
            return None
    return support


def _form_from_support(
    t_rot: ComplexArray, bases: list[ComplexArray], support: list[tuple[int, ...]]
) -> GHZForm:
    dims = t_rot.shape
    unitaries: list[ComplexArray] = []
    for r, d in enumerate(dims):
        order = [idx[r] for idx in support]
        order += [i for i in range(d) if i not in order]
        unitaries.append(bases[r][:, order])
    weights = np.array([t_rot[idx] for idx in support], dtype=np.complex128)
    return GHZForm(tuple(dims), len(support), weights, tuple(unitaries))


def _fidelity_deficit(psi: PureState, form: GHZForm) -> float:
    overlap = np.vdot(psi.unit_amps, form.to_state().unit_amps)
    return max(0.0, 1 - abs(overlap) ** 2)


def ghz_rigidity_detect(
    psi: PureState,
    tol: float = 1e-8,
    seed: Seed = DEFAULTS.seed,
    attempts: int = 3,
) -> RigidityResult:
    """Test whether psi is locally equivalent to sum_j lambda_j |j...j>

    Each site basis comes from the SVD of the state contracted with random
    vectors on all but two sites. In the rotated frame a GHZ-form state is
    supported on entries sharing no index at any site; those entries are
    permuted onto the diagonal.

    Args:
        psi: Pure state on at least two sites.
        tol: Bound on the off-diagonal mass and on the fidelity deficit.
        seed: Seed of the random contractions.
        attempts: Independent contractions tried before giving up.

    Raises:
        DimensionError: If psi has a single site

    Returns:
        detected with the recovered form, absent, or inconclusive when every
        attempt met a near-degenerate spectrum

    """
    if psi.q < 2:
        raise DimensionError("Rigidity detection needs at least two sites")
    if psi.q == 2:
        sch = schmidt(psi, [0])
        left = _complete_unitary(sch["left"])
        right = _complete_unitary(sch["right"])
        coeffs = sch["coefficients"].astype(np.complex128)
        form = GHZForm(psi.dims, coeffs.size, coeffs, (left, right))
        deficit = _fidelity_deficit(psi, form)
        return RigidityResult("detected", form, 0.0, deficit)

    t = psi.unit_tensor
    rng = np.random.default_rng(seed)
    degenerate = False
    best_mass = 1.0
    for attempt in range(attempts):
        bases, min_gap = _site_bases(t, rng)
        degenerate = degenerate or min_gap < _GAP_TOL
        t_rot = t
        for r, u in enumerate(bases):
            t_rot = np.moveaxis(np.tensordot(u.conj().T, t_rot, axes=([1], [r])), 0, r)
        weights = np.abs(t_rot) ** 2
        support = _matching(weights, tol)
        if support is None:
            continue
        mass = max(0.0, 1 - float(sum(weights[idx] for idx in support)))
        best_mass = min(best_mass, mass)
        if mass > tol:
            continue
        form = _form_from_support(t_rot, bases, support)
        deficit = _fidelity_deficit(psi, form)
        if deficit <= tol:
            logger.info(f"GHZ form of rank {form.rank} found on attempt {attempt + 1}")
            return RigidityResult("detected", form, mass, deficit)
    outcome: RigidityOutcome = "inconclusive" if degenerate else "absent"
    logger.info(f"GHZ rigidity: {outcome}")
    return RigidityResult(outcome, None, best_mass)


def _complete_unitary(cols: ComplexArray) -> ComplexArray:
    """Extend orthonormal columns to a unitary."""
    d, k = cols.shape
    if k == d:
        return cols
    q, _ = np.linalg.qr(np.hstack([cols, np.eye(d, dtype=np.complex128)]))
    q[:, :k] = cols
    return q


def reduction_product_decomposition(
    form: GHZForm, traced_site: int
) -> list[ProductTerm]:
    """Fully product decomposition of the form's reduction without traced_site

    The reduction is sum_j |lambda_j|^2 (x)_{k != traced} |u_j^(k)><u_j^(k)|.
    """
    (traced,) = site_set([traced_site], len(form.dims))
    return [
        {
            "weight": float(abs(lam) ** 2),
            "factors": [
                form.local_unitaries[k][:, j]
                for k in range(len(form.dims))
                if k != traced
            ],
        }
        for j, lam in enumerate(form.weights)
    ]


def product_terms_matrix(terms: list[ProductTerm]) -> ComplexArray:
    """sum of weight * (x) |f><f| over the terms."""
    total: ComplexArray | None = None
    for term in terms:
        vec = np.ones(1, dtype=np.complex128)
        for f in term["factors"]:
            vec = np.kron(vec, f)
        proj = term["weight"] * np.outer(vec, vec.conj())
        total = proj if total is None else total + proj
    if total is None:
        raise DomainError("No product terms")
    return total


ConditionMethod = Literal["ppt", "roof", "skipped"]
_CONDITION_SITES = {
    "i": (1, 2, 3),
    "ii": (0, 2, 3),
    "iii": (0, 1, 3),
    "iv": (0, 1, 2),
}


class ConditionStatus(BaseModel):
    """One of the five conditions and how it was decided."""

    holds: bool | None
    value: float | None = None
    method: ConditionMethod = "skipped"


class FiveConditionsReport(BaseModel):
    """Conditions (i)-(iii) separable BCD, ACD, ABD; (iv) entangled ABC;
    (v) every three-tangle roof vanishes.
    """

    conditions: dict[str, ConditionStatus]
    short_circuit: bool

    @property
    def all_hold(self) -> bool:
        """Whether the conjunction of the five conditions holds."""
        return all(status.holds is True for status in self.conditions.values())


def _has_npt_cut(rho: DensityMatrix) -> bool:
    return any(not ppt_check(rho, [r])["is_ppt"] for r in range(rho.q))


def five_conditions_scan(
    psi: PureState,
    opts: RoofOptions | None = None,
    separable_tol: float = DEFAULTS.separable_tol,
    entangled_margin: float = DEFAULTS.entangled_margin,
    short_circuit: bool = False,
) -> FiveConditionsReport:
    """Evaluate the five conditions that no four-qubit pure state meets jointly

    A cut with a negative partial transpose settles (i)-(iii) as failed and
    (iv) as held without an optimizer run. Otherwise the phi convex roof of
    the three-site reduction decides: below separable_tol counts as
    separable, above entangled_margin as entangled.

    Args:
        psi: Four-qubit pure state.
        opts: Convex-roof options.
        separable_tol: Roof value treated as zero.
        entangled_margin: Roof value required for (iv).
        short_circuit: Stop at the first failed condition.

    Raises:
        DimensionError: If psi is not a four-qubit state

    Returns:
        The status of every condition; skipped ones have holds=None

    """
    require_dims(psi.dims, (2, 2, 2, 2), "five_conditions_scan")
    opts = opts or RoofOptions()
    conditions = {
        key: ConditionStatus(holds=None) for key in ("i", "ii", "iii", "iv", "v")
    }
    for key, sites in _CONDITION_SITES.items():
        rho = partial_trace(psi, sites)
        wants_entangled = key == "iv"
        if _has_npt_cut(rho):
            conditions[key] = ConditionStatus(holds=wants_entangled, method="ppt")
        else:
            value = convex_roof(rho, "phi", opts).value
            if wants_entangled:
                holds = value > entangled_margin
            else:
                holds = value < separable_tol
            conditions[key] = ConditionStatus(holds=holds, value=value, method="roof")
        if short_circuit and not conditions[key].holds:
            return FiveConditionsReport(conditions=conditions, short_circuit=True)
    tangles = [
        convex_roof(partial_trace(psi, sites), "three_tangle", opts).value
        for sites in _CONDITION_SITES.values()
    ]
    worst = max(tangles)
    conditions["v"] = ConditionStatus(
        holds=worst < separable_tol, value=worst, method="roof"
    )
    report = FiveConditionsReport(conditions=conditions, short_circuit=short_circuit)
    if report.all_hold:
        logger.warning("All five conditions hold within tolerance")
    return report
