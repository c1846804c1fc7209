# Copyright (c) 2024.
"""Four-qubit invariants and the eighteen-measure report.

The polynomial invariants H, L, M, N, D_uv, W and the hyperdeterminant are
evaluated on the stored amplitudes, so unnormalized family representatives
can be checked against their printed values. The four-tangle and the
report always use the unit-norm state.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from common.QState import (
    ComplexArray,
    DensityMatrix,
    PureState,
    partial_trace,
)
from common.Reports import MeasureReport
from measures.Tangle2 import (
    require_dims,
    spin_flip,
    spin_flip_lambdas,
    two_tangle_pure,
    wootters_mixed,
)
from separability.ConvexRoof import RoofOptions, convex_roof

logger = logging.getLogger(__name__)

QUBITS4 = (2, 2, 2, 2)
SITE_NAMES = "ABCD"

# (i, j, sign) of the terms sign * a_i a_j in H
_H_TERMS = (
    (0, 15, 1),
    (1, 14, -1),
    (2, 13, -1),
    (3, 12, 1),
    (4, 11, -1),
    (5, 10, 1),
    (6, 9, 1),
    (7, 8, -1),
)
_M_LAYOUT = np.array([[0, 8, 2, 10], [1, 9, 3, 11], [4, 12, 6, 14], [5, 13, 7, 15]])
_N_LAYOUT = np.array([[0, 1, 8, 9], [2, 3, 10, 11], [4, 5, 12, 13], [6, 7, 14, 15]])
_PAIR_NAMES = {
    (0, 1): "xy",
    (0, 2): "xz",
    (0, 3): "xw",
    (1, 2): "yz",
    (1, 3): "yw",
    (2, 3): "zw",
}


@dataclass(frozen=True)
class QuadInvariants:
    """Polynomial invariants of a four-qubit coefficient vector."""

    h: complex
    l: complex  # noqa: E741
    m: complex
    n: complex
    sigma: complex
    pi: complex
    w: complex
    delta: complex
    d_xy: complex
    d_xz: complex
    d_xw: complex


def _amps4(psi: PureState, what: str) -> ComplexArray:
    require_dims(psi.dims, QUBITS4, what)
    return psi.amps


def _h_of(a: npt.NDArray[np.complex128]) -> complex:
    return complex(sum(sign * a[i] * a[j] for i, j, sign in _H_TERMS))


def h_coeff(psi: PureState) -> complex:
    """Degree-two invariant H from the coefficient formula."""
    return _h_of(_amps4(psi, "h_coeff"))


def h_spinflip(psi: PureState) -> complex:
    """H as (1/2) <psi*| sigma_y^(x)4 |psi>."""
    a = _amps4(psi, "h_spinflip")
    return complex(a @ spin_flip(4) @ a / 2)


def lmn(psi: PureState) -> tuple[complex, complex, complex]:
    """The three 4x4 determinants L, M and N."""
    a = _amps4(psi, "lmn")
    return (
        complex(np.linalg.det(a.reshape(4, 4))),
        complex(np.linalg.det(a[_M_LAYOUT])),
        complex(np.linalg.det(a[_N_LAYOUT])),
    )


def b_matrix(psi: PureState, u: int, v: int) -> ComplexArray:
    """3x3 matrix B_uv of the Hessian determinant as a form in (u, v)

    The Hessian of the quadrilinear form is taken over the two remaining
    sites; its determinant is (u0^2, u0 u1, u1^2) B (v0^2, v0 v1, v1^2)^T.
    """
    t = _amps4(psi, "b_matrix").reshape(QUBITS4)
    s1, s2 = (r for r in range(4) if r not in (u, v))
    c = np.transpose(t, (s1, s2, u, v))
    b = np.zeros((3, 3), dtype=np.complex128)
    for k1, l1, k2, l2 in itertools.product((0, 1), repeat=4):
        b[k1 + k2, l1 + l2] += (
            c[0, 0, k1, l1] * c[1, 1, k2, l2] - c[0, 1, k1, l1] * c[1, 0, k2, l2]
        )
    return b


def d_pairs(psi: PureState) -> dict[str, complex]:
    """All six D_uv = det B_uv keyed xy, xz, xw, yz, yw, zw."""
    return {
        name: complex(np.linalg.det(b_matrix(psi, u, v)))
        for (u, v), name in _PAIR_NAMES.items()
    }


def w_invariant(psi: PureState) -> tuple[complex, complex, complex, complex]:
    """(D_xy, D_xz, D_xw, W) with W their sum."""
    d = d_pairs(psi)
    return d["xy"], d["xz"], d["xw"], d["xy"] + d["xz"] + d["xw"]


def _hyperdet(h: complex, sigma: complex, pi: complex, w: complex) -> complex:
    return -(
        4 * h**6 * pi
        + 6 * h**5 * sigma * w
        - 3 * h**4 * sigma**2
        - 48 * h**3 * pi * w
        - 4 * h**3 * w**3
        + 48 * h**2 * pi * sigma
        - 60 * h**2 * sigma * w**2
        + 96 * h * sigma**2 * w
        + 64 * pi**2
        + 96 * pi * w**2
        - 32 * sigma**3
        + 36 * w**4
    ) / 108


def quad_invariants(psi: PureState) -> QuadInvariants:
    """Every four-qubit invariant of the stored amplitudes."""
    h = h_coeff(psi)
    l_, m, n = lmn(psi)
    sigma = l_**2 + m**2 + n**2
    pi = (l_ - m) * (m - n) * (n - l_)
    d_xy, d_xz, d_xw, w = w_invariant(psi)
    return QuadInvariants(
        h=h,
        l=l_,
        m=m,
        n=n,
        sigma=sigma,
        pi=pi,
        w=w,
        delta=_hyperdet(h, sigma, pi, w),
        d_xy=d_xy,
        d_xz=d_xz,
        d_xw=d_xw,
    )


def hyperdet4(psi: PureState) -> complex:
    """Degree-24 hyperdeterminant from the H, Sigma, Pi, W polynomial."""
    return quad_invariants(psi).delta


def invariant_relation_residuals(
    inv: QuadInvariants, pairs: dict[str, complex]
) -> dict[str, float]:
    """Residuals of the identities tying the invariants together

    Each residual is scaled by the largest magnitude entering it (at least 1).
    """

    def rel(lhs: complex, rhs: complex, *terms: complex) -> float:
        scale = max([1.0, *(abs(x) for x in terms)])
        return abs(lhs - rhs) / scale

    hl, hm, hn = inv.h * inv.l, inv.h * inv.m, inv.h * inv.n
    return {
        "l+m+n": rel(inv.l + inv.m + inv.n, 0, inv.l, inv.m, inv.n),
        "sigma": rel(inv.sigma, inv.l**2 + inv.m**2 + inv.n**2, inv.sigma),
        "pi": rel(inv.pi, (inv.l - inv.m) * (inv.m - inv.n) * (inv.n - inv.l), inv.pi),
        "d_xy=d_zw": rel(pairs["xy"], pairs["zw"], pairs["xy"], pairs["zw"]),
        "d_xz=d_yw": rel(pairs["xz"], pairs["yw"], pairs["xz"], pairs["yw"]),
        "d_xw=d_yz": rel(pairs["xw"], pairs["yz"], pairs["xw"], pairs["yz"]),
        "hl": rel(hl, inv.d_xz - inv.d_xw, hl, inv.d_xz, inv.d_xw),
        "hm": rel(hm, inv.d_xw - inv.d_xy, hm, inv.d_xw, inv.d_xy),
        "hn": rel(hn, inv.d_xy - inv.d_xz, hn, inv.d_xy, inv.d_xz),
        "w": rel(inv.w, inv.d_xy + inv.d_xz + inv.d_xw, inv.w),
    }


def four_tangle_pure(psi: PureState) -> float:
    """4|H|^2 of the unit-norm state."""
    require_dims(psi.dims, QUBITS4, "four_tangle_pure")
    return 4 * abs(_h_of(psi.unit_amps)) ** 2


def four_tangle_mixed(rho: DensityMatrix) -> float:
    """(max{0, lambda_1 - lambda_2 - ... - lambda_16})^2 from rho rho~."""
    lam = spin_flip_lambdas(rho, 4)
    return max(0.0, float(lam[0] - lam[1:].sum())) ** 2


def gour_identity_check(psi: PureState) -> float:
    """|4|H|^2 - (sum of one-site tangles - sum of two-site tangles)|

    All tangles are pure-state linear-entropy tangles 2(1 - Tr rho^2).
    """
    require_dims(psi.dims, QUBITS4, "gour_identity_check")
    singles = sum(two_tangle_pure(psi, [r]) for r in range(4))
    pairs = sum(two_tangle_pure(psi, [0, r]) for r in (1, 2, 3))
    return abs(four_tangle_pure(psi) - (singles - pairs))


def _label(sites: tuple[int, ...]) -> str:
    return "".join(SITE_NAMES[r] for r in sites)


def measure_set_18(psi: PureState, opts: RoofOptions | None = None) -> MeasureReport:
    """Two-tangles, three-tangles, phi's and the quadripartite measures

    Two-tangles of the two-site reductions use the Wootters formula. The
    three-tangle and phi entries of the three-site reductions are convex
    roofs; they are exact when the reduction is pure and optimizer upper
    bounds otherwise.

    Args:
        psi: Four-qubit pure state (normalized before evaluating).
        opts: Convex-roof options.

    Raises:
        DimensionError: If psi is not a four-qubit state

    Returns:
        The report with eighteen entries

    """
    require_dims(psi.dims, QUBITS4, "measure_set_18")
    opts = opts or RoofOptions()
    report = MeasureReport(dims=list(psi.dims))
    for pair in itertools.combinations(range(4), 2):
        report.add(f"tau_{_label(pair)}", wootters_mixed(partial_trace(psi, pair)))
    triples = list(itertools.combinations(range(4), 3))
    for triple in triples:
        est = convex_roof(partial_trace(psi, triple), "three_tangle", opts)
        report.entries[f"tau_{_label(triple)}"] = est.entry()
    for triple in triples:
        est = convex_roof(partial_trace(psi, triple), "phi", opts)
        report.entries[f"phi_{_label(triple)}"] = est.entry()
    unit = PureState(psi.dims, psi.unit_amps)
    inv = quad_invariants(unit)
    report.add("fourtangle", 4 * abs(inv.h) ** 2)
    report.add("sigma_root", abs(inv.sigma) ** (1 / 2))
    report.add("pi_root", abs(inv.pi) ** (1 / 3))
    report.add("delta_root", abs(inv.delta) ** (1 / 6))
    logger.info(f"Four-qubit measure set assembled with {len(report.entries)} entries")
    return report
