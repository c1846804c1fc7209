# Copyright (c) 2024.
"""Named states: GHZ, W, cluster, Dicke, double Bell, the nine four-qubit
families G1..G9, generalized GHZ states and the canonical three-qubit form.

The G families are printed unnormalized; `make_named(..., normalized=False)`
keeps their raw coefficients.
"""

import logging
import math
from collections.abc import Sequence
from typing import Literal, Self

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from common.Errors import DomainError
from common.QState import PureState, make_pure
from measures.Tangle3 import AcinParams, acin_state

logger = logging.getLogger(__name__)

Family = Literal[
    "ghz",
    "ghz3",
    "ghz4",
    "w3",
    "w4",
    "cluster",
    "dicke42",
    "double_bell",
    "g1",
    "g2",
    "g3",
    "g4",
    "g5",
    "g6",
    "g7",
    "g8",
    "g9",
    "acin",
]

_SQRT_HALF = 1 / math.sqrt(2)
_G_PARAMS = {
    "g1": ("a", "b", "c", "d"),
    "g2": ("a", "b", "c"),
    "g3": ("a", "b"),
    "g4": ("a", "b"),
    "g5": ("a",),
    "g6": ("a",),
    "g7": (),
    "g8": (),
    "g9": (),
}
_ALLOWED = {
    "ghz3": {"a", "b"},
    "ghz4": {"a", "b"},
    "w3": set(),
    "w4": set(),
    "cluster": set(),
    "dicke42": set(),
    "double_bell": {"a", "b", "c", "d"},
    "acin": {"l0", "l1", "l2", "l3", "l4", "phi"},
    **{family: set(names) for family, names in _G_PARAMS.items()},
}


class StateSpec(BaseModel):
    """Family identifier and its real parameters

    The generalized GHZ family takes q (sites), d (local dimension) and
    either weights l0, l1, ... or a rank r for equal weights.
    """

    model_config = ConfigDict(frozen=True)

    family: Family
    params: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_keys(self) -> Self:
        keys = set(self.params)
        if self.family == "ghz":
            extra = {k for k in keys if k not in {"q", "d", "r"} and not _weight_key(k)}
        else:
            extra = keys - _ALLOWED[self.family]
        if extra:
            raise ValueError(f"Unknown parameter(s) {sorted(extra)} for {self.family}")
        return self


def _weight_key(key: str) -> bool:
    return key.startswith("l") and key[1:].isdigit()


def _from_kets(
    q: int, terms: dict[str, complex], normalized: bool = True
) -> PureState:
    amps = np.zeros(2**q, dtype=np.complex128)
    for bits, coeff in terms.items():
        amps[int(bits, 2)] += coeff
    return make_pure([2] * q, amps, allow_unnormalized=not normalized)


def ghz3(a: complex = _SQRT_HALF, b: complex = _SQRT_HALF) -> PureState:
    """a|000> + b|111>."""
    return _from_kets(3, {"000": a, "111": b})


def ghz4(a: complex = _SQRT_HALF, b: complex = _SQRT_HALF) -> PureState:
    """a|0000> + b|1111>."""
    return _from_kets(4, {"0000": a, "1111": b})


def w3() -> PureState:
    """(|001> + |010> + |100>)/sqrt(3)."""
    return _from_kets(3, dict.fromkeys(("001", "010", "100"), 1 / math.sqrt(3)))


def w4() -> PureState:
    """(|0001> + |0010> + |0100> + |1000>)/2."""
    return _from_kets(4, dict.fromkeys(("0001", "0010", "0100", "1000"), 0.5))


def cluster4() -> PureState:
    """(|0000> + |0011> + |1100> - |1111>)/2."""
    return _from_kets(4, {"0000": 0.5, "0011": 0.5, "1100": 0.5, "1111": -0.5})


def dicke42() -> PureState:
    """Equal superposition of the six weight-two strings."""
    kets = ("0011", "0101", "0110", "1001", "1010", "1100")
    return _from_kets(4, dict.fromkeys(kets, 1 / math.sqrt(6)))


def double_bell(a: complex, b: complex, c: complex, d: complex) -> PureState:
    """(a|00> + b|11>) (x) (c|00> + d|11>)

    Raises:
        DomainError: Unless |a|^2 + |b|^2 = |c|^2 + |d|^2 = 1

    """
    for x, y in ((a, b), (c, d)):
        if abs(abs(x) ** 2 + abs(y) ** 2 - 1) > 1e-12:
            raise DomainError("Double Bell factors must be normalized")
    return _from_kets(
        4, {"0000": a * c, "0011": a * d, "1100": b * c, "1111": b * d}
    )


def g_family(
    k: int,
    a: complex = 0.0,
    b: complex = 0.0,
    c: complex = 0.0,
    d: complex = 0.0,
    normalized: bool = False,
) -> PureState:
    """Representative of the k-th four-qubit family, raw by default

    Raises:
        DomainError: If k is outside 1..9

    """
    i = 1j
    terms: dict[str, complex]
    match k:
        case 1:
            terms = {
                "0000": (a + d) / 2,
                "1111": (a + d) / 2,
                "0011": (a - d) / 2,
                "1100": (a - d) / 2,
                "0101": (b + c) / 2,
                "1010": (b + c) / 2,
                "0110": (b - c) / 2,
                "1001": (b - c) / 2,
            }
        case 2:
            terms = {
                "0000": (a + b) / 2,
                "1111": (a + b) / 2,
                "0011": (a - b) / 2,
                "1100": (a - b) / 2,
                "0101": c,
                "1010": c,
                "0110": 1,
            }
        case 3:
            terms = {"0000": a, "1111": a, "0101": b, "1010": b, "0110": 1, "0011": 1}
        case 4:
            terms = {
                "0000": a,
                "1111": a,
                "0101": (a + b) / 2,
                "1010": (a + b) / 2,
                "0110": (a - b) / 2,
                "1001": (a - b) / 2,
                **dict.fromkeys(("0001", "0010", "0111", "1011"), i / math.sqrt(2)),
            }
        case 5:
            terms = {
                **dict.fromkeys(("0000", "0101", "1010", "1111"), a),
                "0001": i,
                "0110": 1,
                "1011": -i,
            }
        case 6:
            terms = {"0000": a, "1111": a, "0011": 1, "0101": 1, "0110": 1}
        case 7:
            terms = dict.fromkeys(("0000", "0101", "1000", "1110"), 1)
        case 8:
            terms = dict.fromkeys(("0000", "1011", "1101", "1110"), 1)
        case 9:
            terms = dict.fromkeys(("0000", "0111"), 1)
        case _:
            raise DomainError(f"Family index {k} outside 1..9")
    return _from_kets(4, terms, normalized)


def generalized_ghz(
    q: int, d: int, weights: Sequence[complex] | npt.NDArray[np.complex128]
) -> PureState:
    """sum_j lambda_j |j...j> on q sites of dimension d

    Raises:
        DomainError: If q < 2, or the rank is outside 1..d

    """
    lam = np.asarray(weights, dtype=np.complex128)
    if q < 2:
        raise DomainError(f"Generalized GHZ needs at least two sites, got {q}")
    if not 1 <= lam.size <= d:
        raise DomainError(f"Rank {lam.size} outside 1..{d}")
    dims = (d,) * q
    amps = np.zeros(d**q, dtype=np.complex128)
    for j, value in enumerate(lam):
        amps[np.ravel_multi_index((j,) * q, dims)] = value
    return make_pure(dims, amps)


def acin(lambdas: Sequence[float], phi: float = 0.0) -> PureState:
    """Canonical three-qubit form with the given coefficients and phase."""
    l0, l1, l2, l3, l4 = lambdas
    return acin_state(AcinParams(lambdas=(l0, l1, l2, l3, l4), phi=phi))


def _ghz_from_params(params: dict[str, float]) -> PureState:
    q = int(params.get("q", 3))
    d = int(params.get("d", 2))
    keys = sorted((k for k in params if _weight_key(k)), key=lambda k: int(k[1:]))
    if keys:
        weights = [params[k] for k in keys]
    else:
        r = int(params.get("r", d))
        weights = [1.0] * r
    return generalized_ghz(q, d, weights)


def make_named(spec: StateSpec, normalized: bool = True) -> PureState:
    """Build a catalog state

    Args:
        spec: Family and parameters.
        normalized: Rescale to unit norm; False keeps raw coefficients.

    Raises:
        DomainError: On out-of-domain parameters

    Returns:
        The state

    """
    p = spec.params
    family = spec.family
    if family in _G_PARAMS:
        args = {name: p.get(name, 0.0) for name in _G_PARAMS[family]}
        return g_family(int(family[1:]), normalized=normalized, **args)
    match family:
        case "ghz":
            psi = _ghz_from_params(p)
        case "ghz3":
            psi = ghz3(p.get("a", _SQRT_HALF), p.get("b", _SQRT_HALF))
        case "ghz4":
            psi = ghz4(p.get("a", _SQRT_HALF), p.get("b", _SQRT_HALF))
        case "w3":
            psi = w3()
        case "w4":
            psi = w4()
        case "cluster":
            psi = cluster4()
        case "dicke42":
            psi = dicke42()
        case "double_bell":
            psi = double_bell(
                p.get("a", _SQRT_HALF),
                p.get("b", _SQRT_HALF),
                p.get("c", _SQRT_HALF),
                p.get("d", _SQRT_HALF),
            )
        case _:
            lambdas = [p.get(f"l{j}", 0.0) for j in range(5)]
            psi = acin(lambdas, p.get("phi", 0.0))
    logger.debug(f"Built {family} state on dims {list(psi.dims)}")
    return psi


def parse_params(text: str) -> dict[str, float]:
    """Parse "k=v,k=v" into a parameter map.

    Raises:
        DomainError: On a malformed pair or non-numeric value

    """
    params: dict[str, float] = {}
    for pair in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise DomainError(f"Malformed parameter {pair!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise DomainError(
                f"Parameter {key.strip()} is not a number: {value!r}"
            ) from e
    return params
