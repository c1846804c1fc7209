# Copyright (c) 2024.
"""Bipartite measures: the pure-state two-tangle by four routes and the
Wootters closed form for two-qubit mixed states.
"""

import logging
from collections.abc import Iterable
from functools import reduce

import numpy as np
import numpy.typing as npt

from common.Errors import DimensionError, SiteError
from common.QState import (
    DensityMatrix,
    PureState,
    RealArray,
    hermitian_eig,
    partial_trace,
    site_set,
    sqrt_psd,
    trace_power,
)

logger = logging.getLogger(__name__)

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def spin_flip(n_qubits: int) -> npt.NDArray[np.complex128]:
    """sigma_y tensored n_qubits times."""
    return reduce(np.kron, [SIGMA_Y] * n_qubits)


def require_dims(dims: tuple[int, ...], expected: tuple[int, ...], what: str) -> None:
    """Raise DimensionError unless dims equal expected."""
    if dims != expected:
        raise DimensionError(f"{what} needs dims {list(expected)}, got {list(dims)}")


def two_tangle_pure(psi: PureState, cut: Iterable[int]) -> float:
    """Linear-entropy tangle 2(1 - Tr rho_cut^2) of a pure state

    Raises:
        SiteError: If the cut is empty or contains every site

    """
    cut_t = site_set(cut, psi.q)
    if not cut_t or len(cut_t) == psi.q:
        raise SiteError(f"Cut {cut_t} is trivial for {psi.q} sites")
    rho = partial_trace(psi, cut_t)
    return 2 * (1 - trace_power(rho.mat, 2).real)


def concurrence_pure(psi: PureState) -> float:
    """|<psi| sigma_y (x) sigma_y |psi*>| of a two-qubit state."""
    require_dims(psi.dims, (2, 2), "concurrence_pure")
    t = psi.unit_amps
    return float(abs(t @ spin_flip(2) @ t))


def two_tangle_det(psi: PureState) -> float:
    """4 det rho_A of a two-qubit state."""
    require_dims(psi.dims, (2, 2), "two_tangle_det")
    return 4 * float(np.linalg.det(partial_trace(psi, [0]).mat).real)


def two_tangle_hyperdet(psi: PureState) -> float:
    """4 |t00 t11 - t01 t10|^2 of a two-qubit state."""
    require_dims(psi.dims, (2, 2), "two_tangle_hyperdet")
    t = psi.unit_amps
    return 4 * abs(t[0] * t[3] - t[1] * t[2]) ** 2


def tangle_amplitudes(batch: npt.NDArray[np.complex128]) -> RealArray:
    """Two-tangle of each row of an (m, 4) array of unit two-qubit states."""
    return 4 * np.abs(batch[:, 0] * batch[:, 3] - batch[:, 1] * batch[:, 2]) ** 2


def spin_flip_lambdas(rho: DensityMatrix, n_qubits: int) -> RealArray:
    """Square roots of the eigenvalues of rho rho~, descending

    rho~ is the spin-flipped state sigma_y^n rho* sigma_y^n. The eigenvalues
    are taken from the Hermitian similarity sqrt(rho) rho~ sqrt(rho) and
    clamped at zero.
    """
    require_dims(rho.dims, (2,) * n_qubits, "spin-flip tangle")
    flip = spin_flip(n_qubits)
    tilde = flip @ rho.mat.conj() @ flip
    root = sqrt_psd(rho.mat)
    spec = hermitian_eig(root @ tilde @ root, tol=1e-8)
    return np.sqrt(np.clip(spec.eigenvalues, 0.0, None))


def wootters_lambdas(rho: DensityMatrix) -> RealArray:
    """The four Wootters lambdas of a two-qubit density matrix."""
    return spin_flip_lambdas(rho, 2)


def wootters_mixed(rho: DensityMatrix) -> float:
    """Convex-roof two-tangle (squared concurrence) of a two-qubit state."""
    lam = wootters_lambdas(rho)
    return max(0.0, float(lam[0] - lam[1:].sum())) ** 2
