# Copyright (c) 2024.
"""Cyclic Jacobi eigensolver for small complex Hermitian matrices."""

import logging

import numpy as np
import numpy.typing as npt

logger = logging.getLogger(__name__)

_TINY = 1e-300


def _off_norm(a: npt.NDArray[np.complex128]) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(
    m: npt.ArrayLike,
    threshold: float = 1e-14,
    max_sweeps: int = 100,
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.complex128]]:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations

    Each rotation first removes the phase of the pivot a_pq with a diagonal
    unitary and then applies the real symmetric Jacobi rotation.

    Args:
        m: Hermitian matrix; only its Hermitian part is used.
        threshold: Stop when the off-diagonal Frobenius norm falls below
            threshold * max(1, ||m||_F).
        max_sweeps: Maximum number of full cyclic sweeps.

    Returns:
        Eigenvalues in descending order and the matching unitary eigenvectors
        as columns.

    """
    a = np.array(m, dtype=np.complex128, copy=True)
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = threshold * max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        if _off_norm(a) < target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < _TINY:
                    continue
                phase = apq / mag
                zeta = (a[q, q].real - a[p, p].real) / (2 * mag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                block = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ block
                a[idx, :] = block.conj().T @ a[idx, :]
                a[p, q] = 0
                a[q, p] = 0
                v[:, idx] = v[:, idx] @ block
    if _off_norm(a) >= target:
        logger.warning(
            f"Jacobi stopped after {max_sweeps} sweeps, off-norm {_off_norm(a):.3e}"
        )

    vals = np.real(np.diag(a))
    order = np.argsort(vals)[::-1]
    return vals[order], v[:, order]
