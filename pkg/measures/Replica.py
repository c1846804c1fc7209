# Copyright (c) 2024.
"""Replica multi-invariants Z = <psi^{(x)N}| Omega_1 ... Omega_q |psi^{(x)N}>.

Each site carries a permutation of the N replica copies. Special cases are
Renyi purities, the third-order negativity I5 and the hypercube
multi-entropy; |Z| = 1 exactly on fully product states.
"""

import logging
import math
import re
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from common.EnvManager import DEFAULTS
from common.Errors import DimensionError, DomainError, PermutationError, SizeGuardError
from common.QState import PureState, site_set

logger = logging.getLogger(__name__)

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """Bijection of replica labels, stored 0-based as image[x] = Omega(x)."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        """Validate the bijection."""
        if sorted(self.image) != list(range(len(self.image))):
            raise PermutationError(f"{self.image} is not a permutation")

    @property
    def n(self) -> int:
        """Number of replica labels."""
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        """Identity on n labels."""
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Permutation":
        """Cyclic shift (1 2 ... n)."""
        return cls(tuple((x + 1) % n for x in range(n)))

    def __call__(self, x: int) -> int:
        """Image of the 0-based label x."""
        return self.image[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: x -> self(other(x))."""
        if other.n != self.n:
            raise PermutationError("Cannot compose permutations of different size")
        return Permutation(tuple(self.image[other.image[x]] for x in range(self.n)))

    def inverse(self) -> "Permutation":
        """Inverse permutation."""
        inv = [0] * self.n
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation(tuple(inv))

    def to_cycles(self) -> str:
        """Canonical cycle notation with 1-based labels, "id" for the identity

        Cycles start at their smallest label and are ordered by it; fixed
        points are omitted. Labels are space separated once N exceeds 9.
        """
        sep = "" if self.n <= 9 else " "
        seen: set[int] = set()
        parts: list[str] = []
        for start in range(self.n):
            if start in seen or self.image[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self.image[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.image[x]
            parts.append("(" + sep.join(str(c + 1) for c in cyc) + ")")
        return "".join(parts) if parts else "id"


def _cycle_labels(text: str) -> list[list[int]]:
    body = text.strip()
    if not body or _CYCLE.sub("", body).strip():
        raise PermutationError(f"Cannot parse cycle notation {text!r}")
    cycles: list[list[int]] = []
    for inner in _CYCLE.findall(body):
        tokens = inner.replace(",", " ").split()
        if len(tokens) == 1 and tokens[0].isdigit() and len(tokens[0]) > 1:
            tokens = list(tokens[0])
        if not tokens or not all(tok.isdigit() for tok in tokens):
            raise PermutationError(f"Cannot parse cycle ({inner}) in {text!r}")
        cycles.append([int(tok) for tok in tokens])
    return cycles


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse cycle notation such as "(123)", "(12)(3)" or "id"

    Labels are 1-based. Up to nine labels may be written without
    separators; larger labels need spaces or commas, e.g. "(1 2 10)".

    Args:
        text: Cycle string.
        n: Number of labels; inferred as the largest label when omitted.

    Raises:
        PermutationError: On repeated or out-of-range labels or bad syntax

    Returns:
        The permutation

    """
    if text.strip() == "id":
        return Permutation.identity(n or 1)
    cycles = _cycle_labels(text)
    labels = [x for cyc in cycles for x in cyc]
    if len(set(labels)) != len(labels):
        raise PermutationError(f"Repeated label in {text!r}")
    size = n if n is not None else max(labels)
    if min(labels) < 1 or max(labels) > size:
        raise PermutationError(f"Label out of range 1..{size} in {text!r}")
    image = list(range(size))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            image[x - 1] = cyc[(i + 1) % len(cyc)] - 1
    return Permutation(tuple(image))


@dataclass(frozen=True)
class ReplicaSpec:
    """Replica count and one permutation per site."""

    n_replicas: int
    perms: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        """Check every permutation acts on the replica labels."""
        if self.n_replicas < 1:
            raise PermutationError("At least one replica is required")
        for perm in self.perms:
            if perm.n != self.n_replicas:
                raise PermutationError(
                    f"Permutation {perm.to_cycles()} acts on {perm.n} labels, "
                    f"expected {self.n_replicas}"
                )

    def left_multiply(self, omega: Permutation) -> "ReplicaSpec":
        """Spec with every permutation replaced by omega after it."""
        return ReplicaSpec(self.n_replicas, tuple(omega.compose(p) for p in self.perms))

    def pairwise_distinct(self) -> bool:
        """Whether no two sites share a permutation."""
        return len({p.image for p in self.perms}) == len(self.perms)


def parse_spec(text: str) -> ReplicaSpec:
    """Parse semicolon-separated cycle strings, e.g. "id;(123);(132)".

    The replica count is the largest label that appears (at least 1).
    """
    parts = [part.strip() for part in text.split(";")]
    if not all(parts):
        raise PermutationError(f"Empty permutation in {text!r}")
    labels = [
        x for part in parts if part != "id" for cyc in _cycle_labels(part) for x in cyc
    ]
    n = max([*labels, 1])
    return ReplicaSpec(n, tuple(parse_cycles(part, n) for part in parts))


def i5_spec() -> ReplicaSpec:
    """(id, (123), (132)) on three replicas."""
    return ReplicaSpec(
        3,
        (Permutation.identity(3), Permutation((1, 2, 0)), Permutation((2, 0, 1))),
    )


def multi_invariant(
    psi: PureState,
    spec: ReplicaSpec,
    work_limit: int = DEFAULTS.replica_work_limit,
) -> complex:
    """Contract N bra and N ket copies of psi wired by the site permutations

    Bra copy x carries site index i_r(x); ket copy x carries i_r(Omega_r(x)).
    The contraction is planned by numpy.einsum without forming psi^{(x)N}.

    Args:
        psi: Pure state (normalized before contracting).
        spec: Replica count and one permutation per site.
        work_limit: Largest accepted (prod d_r)^N.

    Raises:
        DimensionError: If the number of permutations differs from the site count
        SizeGuardError: If (prod d_r)^N exceeds work_limit

    Returns:
        The complex multi-invariant

    """
    if len(spec.perms) != psi.q:
        raise DimensionError(
            f"Spec has {len(spec.perms)} permutations for {psi.q} sites"
        )
    n = spec.n_replicas
    work = psi.dim**n
    if work > work_limit:
        raise SizeGuardError(f"Replica contraction needs {work} > {work_limit} units")
    t = psi.unit_tensor
    tc = t.conj()
    operands: list[object] = []
    for x in range(n):
        operands += [tc, [r * n + x for r in range(psi.q)]]
        operands += [t, [r * n + spec.perms[r](x) for r in range(psi.q)]]
    return complex(np.einsum(*operands, [], optimize="greedy"))


def renyi_trace(psi: PureState, cut: Iterable[int], n: int) -> float:
    """Tr rho_cut^n through the cyclic replica permutation on the cut sites."""
    if n < 1:
        raise DomainError(f"Renyi index must be at least 1, got {n}")
    cut_t = site_set(cut, psi.q)
    perms = tuple(
        Permutation.cycle(n) if r in cut_t else Permutation.identity(n)
        for r in range(psi.q)
    )
    return multi_invariant(psi, ReplicaSpec(n, perms)).real


def hypercube_spec(q: int) -> ReplicaSpec:
    """N = 2^(q-1) replicas on the hypercube; site 1 idle, site r flips bit r-2."""
    n = 2 ** (q - 1)
    perms = [Permutation.identity(n)]
    for bit in range(q - 1):
        perms.append(Permutation(tuple(x ^ (1 << bit) for x in range(n))))
    return ReplicaSpec(n, tuple(perms))


def multi_entropy2(psi: PureState) -> float:
    """Hypercube multi-invariant; equals Tr rho_2^2 for two sites."""
    if psi.q < 2:
        raise DimensionError("The multi-entropy needs at least two sites")
    return multi_invariant(psi, hypercube_spec(psi.q)).real


def flattening_rank_one(psi: PureState, tol: float = 1e-9) -> bool:
    """Whether every single-site flattening of psi has rank one within tol."""
    t = psi.unit_tensor
    for r in range(psi.q):
        mat = np.moveaxis(t, r, 0).reshape(psi.dims[r], -1)
        s = np.linalg.svd(mat, compute_uv=False)
        if s[1] > tol * s[0]:
            return False
    return True


def product_criterion(
    psi: PureState,
    spec: ReplicaSpec,
    tol: float = DEFAULTS.criterion_tol,
) -> tuple[bool, float]:
    """Fully-product test |Z| = 1

    Raises:
        PermutationError: If two sites share a permutation

    Returns:
        (deficit < tol, deficit) with deficit = 1 - |Z|

    """
    if not spec.pairwise_distinct():
        raise PermutationError(
            "The product criterion needs pairwise distinct permutations"
        )
    deficit = 1 - abs(multi_invariant(psi, spec))
    return deficit < tol, deficit


def replica_count_lower_bound(q: int) -> int:
    """Smallest N with N! >= q, the fewest replicas giving q distinct permutations."""
    n = 1
    while math.factorial(n) < q:
        n += 1
    return n
