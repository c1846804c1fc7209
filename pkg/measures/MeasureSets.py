# Copyright (c) 2024.
"""Measure sets reported by the `measure` command."""

import logging
from typing import Literal

from common.Errors import DimensionError
from common.QState import PureState, partial_trace, trace_power
from common.Reports import MeasureReport
from measures.Tangle2 import concurrence_pure, two_tangle_pure, wootters_mixed
from measures.Tangle3 import i5_pt, phi_direct, three_tangle
from measures.Tangle4 import measure_set_18, quad_invariants
from separability.ConvexRoof import RoofOptions

logger = logging.getLogger(__name__)

MeasureSetName = Literal["bipartite", "tripartite", "quadripartite", "all"]

_BY_SITES: dict[int, MeasureSetName] = {
    2: "bipartite",
    3: "tripartite",
    4: "quadripartite",
}


def bipartite_set(psi: PureState) -> MeasureReport:
    """Two-tangle and purity of a two-site state; concurrence for qubits."""
    if psi.q != 2:
        raise DimensionError(f"Bipartite set needs two sites, got {psi.q}")
    report = MeasureReport(dims=list(psi.dims))
    report.add("tau_AB", two_tangle_pure(psi, [0]))
    report.add("purity_A", trace_power(partial_trace(psi, [0]).mat, 2).real)
    if psi.dims == (2, 2):
        report.add("concurrence", concurrence_pure(psi))
    return report


def tripartite_set(psi: PureState) -> MeasureReport:
    """I5 for any three sites; tangles and phi_ABC for three qubits."""
    if psi.q != 3:
        raise DimensionError(f"Tripartite set needs three sites, got {psi.q}")
    report = MeasureReport(dims=list(psi.dims))
    report.add("i5", i5_pt(psi))
    if psi.dims == (2, 2, 2):
        for name, keep in (("tau_AB", [0, 1]), ("tau_AC", [0, 2]), ("tau_BC", [1, 2])):
            report.add(name, wootters_mixed(partial_trace(psi, keep)))
        report.add("tau_ABC", three_tangle(psi))
        report.add("phi_ABC", phi_direct(psi))
    return report


def quadripartite_set(
    psi: PureState, opts: RoofOptions | None = None
) -> MeasureReport:
    """The eighteen four-qubit measures; |W|^(2/3) rides along in extras."""
    report = measure_set_18(psi, opts)
    inv = quad_invariants(PureState(psi.dims, psi.unit_amps))
    report.extras["w_root"] = abs(inv.w) ** (2 / 3)
    return report


def measure_set(
    psi: PureState, which: MeasureSetName, opts: RoofOptions | None = None
) -> MeasureReport:
    """Dispatch on the set name; "all" picks the set matching the site count

    Raises:
        DimensionError: If the state does not fit the requested set

    """
    if which == "all":
        if psi.q not in _BY_SITES:
            raise DimensionError(f"No measure set for {psi.q} sites")
        which = _BY_SITES[psi.q]
    logger.info(f"Evaluating the {which} measure set on dims {list(psi.dims)}")
    match which:
        case "bipartite":
            return bipartite_set(psi)
        case "tripartite":
            return tripartite_set(psi)
        case "quadripartite":
            return quadripartite_set(psi, opts)
        case "all":
            raise DimensionError(f"No measure set for {psi.q} sites")
