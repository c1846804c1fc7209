# Copyright (c) 2024.
"""Finite-dimensional pure and mixed states, reductions, transposes and spectra.

Amplitudes are stored flat with the last site index varying fastest, so for
four qubits the amplitude a_r belongs to |jklm> with r = 8j + 4k + 2l + m.
All values are immutable after construction.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import TypedDict

import numpy as np
import numpy.typing as npt
from scipy.stats import unitary_group

from common.EnvManager import DEFAULTS, EigMethod
from common.Errors import (
    DimensionError,
    DomainError,
    NormalizationError,
    NotHermitianError,
    NotPositiveError,
    SiteError,
    SizeGuardError,
)
from utils.jacobi import jacobi_eigh

logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]
SiteSet = tuple[int, ...]
Seed = int | np.random.Generator | np.random.SeedSequence

_SCHMIDT_CUTOFF = 1e-12


def _frozen(arr: npt.ArrayLike) -> ComplexArray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _frozen_real(arr: npt.ArrayLike) -> RealArray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims_t = tuple(int(d) for d in dims)
    if not dims_t:
        raise DimensionError("At least one site is required")
    if any(d < 2 for d in dims_t):
        raise DimensionError(f"Every site dimension must be at least 2, got {dims_t}")
    if math.prod(dims_t) > DEFAULTS.max_total_dim:
        raise SizeGuardError(
            f"Total dimension {math.prod(dims_t)} exceeds {DEFAULTS.max_total_dim}"
        )
    return dims_t


def site_set(sites: Iterable[int], q: int) -> SiteSet:
    """Validate a list of site indices and return it sorted

    Args:
        sites: 0-based site indices.
        q: Number of sites of the system.

    Raises:
        SiteError: On repeated or out-of-range indices

    Returns:
        Sorted tuple of distinct indices

    """
    chosen = tuple(sorted(int(s) for s in sites))
    if len(set(chosen)) != len(chosen):
        raise SiteError(f"Repeated site in {chosen}")
    for s in chosen:
        if s < 0 or s >= q:
            raise SiteError(f"Site {s} out of range for {q} sites")
    return chosen


@dataclass(frozen=True)
class PureState:
    """Coefficient vector of a multi-qudit pure state."""

    dims: tuple[int, ...]
    amps: ComplexArray
    normalized: bool = True
    scale: float = 1.0

    @property
    def q(self) -> int:
        """Number of sites."""
        return len(self.dims)

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension."""
        return math.prod(self.dims)

    @property
    def unit_amps(self) -> ComplexArray:
        """Amplitudes rescaled to unit norm (the stored ones when already unit)."""
        if self.normalized:
            return self.amps
        return self.amps / np.linalg.norm(self.amps)

    @property
    def tensor(self) -> ComplexArray:
        """Stored amplitudes as a q-index tensor."""
        return self.amps.reshape(self.dims)

    @property
    def unit_tensor(self) -> ComplexArray:
        """Unit-norm amplitudes as a q-index tensor."""
        return self.unit_amps.reshape(self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix over subsystems."""

    dims: tuple[int, ...]
    mat: ComplexArray

    @property
    def q(self) -> int:
        """Number of sites."""
        return len(self.dims)

    @property
    def dim(self) -> int:
        """Side length of the matrix."""
        return math.prod(self.dims)


@dataclass(frozen=True)
class HermitianSpectrum:
    """Descending eigenvalues with unitary eigenvectors as columns."""

    eigenvalues: RealArray
    eigenvectors: ComplexArray
    correction: float = 0.0

    def reconstruct(self) -> ComplexArray:
        """Rebuild V diag(eigenvalues) V^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


class SchmidtResult(TypedDict):
    """Schmidt decomposition psi = sum_k s_k left[:, k] (x) right[:, k]."""

    coefficients: RealArray
    left: ComplexArray
    right: ComplexArray


def make_pure(
    dims: Sequence[int],
    amps: npt.ArrayLike,
    allow_unnormalized: bool = False,
    tol: float = DEFAULTS.tol_norm,
) -> PureState:
    """Build a pure state from per-site dimensions and flat amplitudes

    A vector whose norm is already within tol of one is stored unchanged, so
    a state survives a file round trip bit for bit.

    Args:
        dims: Per-site dimensions, each at least 2.
        amps: Flat amplitudes, last site index fastest.
        allow_unnormalized: Keep the amplitudes as given instead of rescaling.
        tol: Norm tolerance.

    Raises:
        DimensionError: If the amplitude count does not match the dimensions
        NormalizationError: If the vector is zero or not finite

    Returns:
        The pure state, carrying its original norm as scale

    """
    dims_t = _check_dims(dims)
    vec = np.asarray(amps, dtype=np.complex128).reshape(-1)
    if vec.size != math.prod(dims_t):
        raise DimensionError(
            f"Got {vec.size} amplitudes for dimensions {dims_t} "
            f"(expected {math.prod(dims_t)})"
        )
    norm = float(np.linalg.norm(vec))
    if norm == 0 or not math.isfinite(norm):
        raise NormalizationError("Amplitude vector is zero or not finite")
    unit = abs(norm - 1) <= tol
    if allow_unnormalized:
        return PureState(dims_t, _frozen(vec), normalized=unit, scale=norm)
    if not unit:
        vec = vec / norm
    return PureState(dims_t, _frozen(vec), normalized=True, scale=norm)


def make_density(
    dims: Sequence[int],
    mat: npt.ArrayLike,
    tol: float = DEFAULTS.tol_norm,
    tol_psd: float = DEFAULTS.tol_psd,
) -> DensityMatrix:
    """Build a validated density matrix

    Args:
        dims: Subsystem dimensions.
        mat: Square matrix of side prod(dims).
        tol: Tolerance on hermiticity and unit trace.
        tol_psd: Smallest accepted (negative) eigenvalue magnitude.

    Raises:
        DimensionError: If the shape does not match the dimensions
        NotHermitianError: If the matrix is not Hermitian
        NormalizationError: If the trace is not one
        NotPositiveError: If an eigenvalue is below -tol_psd

    Returns:
        The density matrix, stored in symmetrized form

    """
    dims_t = _check_dims(dims)
    arr = np.asarray(mat, dtype=np.complex128)
    d = math.prod(dims_t)
    if arr.shape != (d, d):
        raise DimensionError(f"Matrix shape {arr.shape} does not match dims {dims_t}")
    if float(np.max(np.abs(arr - arr.conj().T))) > tol:
        raise NotHermitianError("Density matrix is not Hermitian")
    if abs(np.trace(arr) - 1) > tol:
        raise NormalizationError(f"Density matrix trace {np.trace(arr)} is not 1")
    sym = (arr + arr.conj().T) / 2
    lowest = float(np.linalg.eigvalsh(sym)[0])
    if lowest < -tol_psd:
        raise NotPositiveError(f"Density matrix has eigenvalue {lowest:.3e}")
    return DensityMatrix(dims_t, _frozen(sym))


def pure_density(psi: PureState) -> DensityMatrix:
    """Projector onto the unit-norm state."""
    v = psi.unit_amps
    return DensityMatrix(psi.dims, _frozen(np.outer(v, v.conj())))


def partial_trace(
    state: PureState | DensityMatrix, keep: Iterable[int]
) -> DensityMatrix:
    """Reduce a state to the kept sites

    Args:
        state: Pure state (normalized before reducing) or density matrix.
        keep: Sites to keep; the result orders them ascending.

    Raises:
        SiteError: If keep is empty or invalid

    Returns:
        The reduced density matrix

    """
    q = len(state.dims)
    keep_t = site_set(keep, q)
    if not keep_t:
        raise SiteError("The kept site set must be nonempty")
    kept_dims = tuple(state.dims[i] for i in keep_t)
    d_keep = math.prod(kept_dims)
    if isinstance(state, PureState):
        rest = tuple(i for i in range(q) if i not in keep_t)
        t = np.transpose(state.unit_tensor, keep_t + rest).reshape(d_keep, -1)
        red = t @ t.conj().T
    else:
        t = state.mat.reshape(state.dims + state.dims)
        in_labels = list(range(q)) + [q + i if i in keep_t else i for i in range(q)]
        out_labels = list(keep_t) + [q + i for i in keep_t]
        red = np.einsum(t, in_labels, out_labels).reshape(d_keep, d_keep)
    return DensityMatrix(kept_dims, _frozen((red + red.conj().T) / 2))


def partial_transpose(
    rho: DensityMatrix | ComplexArray,
    sites: Iterable[int],
    dims: Sequence[int] | None = None,
) -> ComplexArray:
    """Transpose the indices of the given sites

    Args:
        rho: Density matrix, or a bare square matrix together with dims.
        sites: Sites whose row and column indices are exchanged.
        dims: Subsystem dimensions, required for a bare matrix.

    Raises:
        DimensionError: If a bare matrix comes without matching dims
        SiteError: On invalid sites

    Returns:
        The partially transposed matrix

    """
    if isinstance(rho, DensityMatrix):
        dims_t, mat = rho.dims, rho.mat
    else:
        if dims is None:
            raise DimensionError("Subsystem dimensions are required for a bare matrix")
        dims_t, mat = tuple(dims), np.asarray(rho)
    q = len(dims_t)
    d = math.prod(dims_t)
    if mat.shape != (d, d):
        raise DimensionError(f"Matrix shape {mat.shape} does not match dims {dims_t}")
    axes = list(range(2 * q))
    for s in site_set(sites, q):
        axes[s], axes[q + s] = axes[q + s], axes[s]
    return np.transpose(mat.reshape(dims_t + dims_t), axes).reshape(d, d)


def trace_power(m: npt.ArrayLike, n: int) -> complex:
    """Tr(M^n) by repeated multiplication

    Raises:
        DimensionError: If M is not square
        DomainError: If n < 1

    """
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Matrix of shape {arr.shape} is not square")
    if n < 1:
        raise DomainError(f"Power must be at least 1, got {n}")
    return complex(np.trace(np.linalg.matrix_power(arr, n)))


def hermitian_eig(
    m: npt.ArrayLike,
    method: EigMethod | None = None,
    tol: float = DEFAULTS.tol_hermitian,
) -> HermitianSpectrum:
    """Eigen-decompose a Hermitian matrix

    The input is symmetrized as (M + M^dagger)/2 and the size of that
    correction is kept on the result.

    Args:
        m: Matrix Hermitian within tol.
        method: "lapack" (numpy eigh) or "jacobi"; defaults to the setting.
        tol: Hermiticity tolerance.

    Raises:
        DimensionError: If M is not square
        NotHermitianError: If M deviates from hermiticity by more than tol

    Returns:
        Spectrum with eigenvalues in descending order

    """
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Matrix of shape {arr.shape} is not square")
    deviation = float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0
    if deviation > tol:
        raise NotHermitianError(f"Matrix deviates from hermiticity by {deviation:.3e}")
    sym = (arr + arr.conj().T) / 2
    if (method or DEFAULTS.eig_method) == "jacobi":
        vals, vecs = jacobi_eigh(
            sym, DEFAULTS.jacobi_threshold, DEFAULTS.jacobi_max_sweeps
        )
    else:
        vals, vecs = np.linalg.eigh(sym)
        vals, vecs = vals[::-1], vecs[:, ::-1]
    return HermitianSpectrum(_frozen_real(vals), _frozen(vecs), deviation / 2)


def sqrt_psd(m: npt.ArrayLike, tol: float = DEFAULTS.tol_psd) -> ComplexArray:
    """Hermitian square root with eigenvalues in [-tol, 0) clamped to zero

    Raises:
        NotPositiveError: If an eigenvalue is below -tol

    """
    spec = hermitian_eig(m)
    vals = spec.eigenvalues
    if vals.size and vals[-1] < -tol:
        raise NotPositiveError(f"Matrix has eigenvalue {vals[-1]:.3e}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    v = spec.eigenvectors
    return (v * root) @ v.conj().T


def schmidt(psi: PureState, cut: Iterable[int]) -> SchmidtResult:
    """Schmidt decomposition across cut | rest

    Coefficients below 1e-12 of the largest are dropped.

    Raises:
        SiteError: If the cut is empty or contains every site

    """
    cut_t = site_set(cut, psi.q)
    if not cut_t or len(cut_t) == psi.q:
        raise SiteError(f"Cut {cut_t} is trivial for {psi.q} sites")
    rest = tuple(i for i in range(psi.q) if i not in cut_t)
    d_cut = math.prod(psi.dims[i] for i in cut_t)
    mat = np.transpose(psi.unit_tensor, cut_t + rest).reshape(d_cut, -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = s > _SCHMIDT_CUTOFF * s[0]
    return {
        "coefficients": s[keep],
        "left": u[:, keep],
        "right": vh[keep].T,
    }


def haar_random_pure(dims: Sequence[int], seed: Seed) -> PureState:
    """Haar-random pure state from normalized standard complex Gaussians."""
    rng = np.random.default_rng(seed)
    d = math.prod(_check_dims(dims))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return make_pure(dims, z / np.linalg.norm(z))


def haar_unitary(d: int, rng: np.random.Generator) -> ComplexArray:
    """Haar-random d x d unitary."""
    return np.asarray(unitary_group.rvs(d, random_state=rng), dtype=np.complex128)


def random_product_pure(dims: Sequence[int], seed: Seed) -> PureState:
    """Tensor product of independent Haar-random single-site states."""
    rng = np.random.default_rng(seed)
    vec = np.ones(1, dtype=np.complex128)
    for d in _check_dims(dims):
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        vec = np.kron(vec, z / np.linalg.norm(z))
    return make_pure(dims, vec)


def apply_local_unitaries(
    psi: PureState, unitaries: Sequence[npt.ArrayLike]
) -> PureState:
    """Apply one unitary per site, U_1 (x) ... (x) U_q |psi>

    Raises:
        DimensionError: If the number or shapes of the unitaries do not fit

    """
    if len(unitaries) != psi.q:
        raise DimensionError(f"Need {psi.q} unitaries, got {len(unitaries)}")
    t = psi.tensor
    for r, u in enumerate(unitaries):
        u_arr = np.asarray(u, dtype=np.complex128)
        if u_arr.shape != (psi.dims[r], psi.dims[r]):
            raise DimensionError(f"Unitary {r} has shape {u_arr.shape}")
        t = np.moveaxis(np.tensordot(u_arr, t, axes=([1], [r])), 0, r)
    return make_pure(psi.dims, t.reshape(-1), allow_unnormalized=not psi.normalized)


def random_density(dims: Sequence[int], rank: int, seed: Seed) -> DensityMatrix:
    """Random density matrix of the given rank from the Ginibre ensemble."""
    rng = np.random.default_rng(seed)
    d = math.prod(_check_dims(dims))
    if not 1 <= rank <= d:
        raise DomainError(f"Rank {rank} outside 1..{d}")
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return make_density(dims, rho / np.trace(rho).real)
