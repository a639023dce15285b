"""Erasure masks, error operators, and worst-case erasure errors.

Fusion-level errors erase whole members; discrete-level errors erase single
vectors (for bridged frames, the block of all vectors of one member via
:func:`block_mask`). Indices are 1-based everywhere, matching the bundled
worked examples. Enumeration is always exhaustive; the operations refuse
rather than sample once the subset count exceeds the cap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .discrete import DiscreteFrame
from .duality import DualPair
from .fusion import frame_operator
from .linalg import DEFAULT_TOL, Tolerance, projector, spd_inverse

__all__ = [
    "NormKind",
    "ENUMERATION_CAP",
    "ErasureMask",
    "ErasureReport",
    "matrix_norm",
    "block_mask",
    "fusion_error_operator",
    "fusion_partial_error",
    "worst_case_error",
    "discrete_error_operator",
    "discrete_worst_case",
    "partial_erasure_error",
]

NormKind = Literal["frobenius", "operator"]

# "optimal" claims must never rest on sampling, so refuse past this many subsets
ENUMERATION_CAP = 10**6

_TIE_REL = 1e-12


@dataclass(frozen=True)
class ErasureMask:
    """Set of erased 1-based indices out of ``total``; empty means nothing lost."""

    total: int
    erased: frozenset[int]

    def __init__(self, total: int, erased: Iterable[int]):
        object.__setattr__(self, "total", int(total))
        object.__setattr__(self, "erased", frozenset(int(k) for k in erased))
        if self.total <= 0:
            raise ValueError("total must be positive")
        for k in self.erased:
            if not 1 <= k <= self.total:
                raise ValueError(f"erased index {k} out of range 1..{self.total}")


@dataclass(frozen=True, eq=False)
class ErasureReport:
    """Worst-case report over all subsets of size ``r``.

    ``argmax_subsets`` lists every subset attaining the worst value within a
    1e-12 relative tie window, lexicographically sorted. ``per_subset_values``
    is included for small enumerations only.
    """

    r: int
    norm_kind: NormKind
    worst_value: float
    argmax_subsets: tuple[tuple[int, ...], ...]
    per_subset_values: tuple[tuple[tuple[int, ...], float], ...] | None = None


def matrix_norm(a: np.ndarray, norm_kind: NormKind) -> float:
    if norm_kind == "frobenius":
        return float(np.linalg.norm(a, "fro"))
    if norm_kind == "operator":
        if a.size == 0:
            return 0.0
        return float(np.linalg.svd(a, compute_uv=False)[0])
    raise ValueError(f"unknown norm kind {norm_kind!r}")


def block_mask(f: DiscreteFrame, i: int) -> ErasureMask:
    """Mask erasing every vector of bridged member ``i`` (uses the (i, j) labels)."""
    if f.labels is None:
        raise ValueError("frame carries no labels; block masks need bridge provenance")
    erased = [k + 1 for k, (mi, _) in enumerate(f.labels) if mi == i]
    if not erased:
        raise ValueError(f"no vectors labeled with member {i}")
    return ErasureMask(f.count, erased)


def fusion_error_operator(pair: DualPair, mask: ErasureMask) -> np.ndarray:
    """sum over erased i of w_i v_i proj_{V_i} S_W^{-1} proj_{W_i}."""
    w = pair.primal
    v = pair.dual_candidate
    if mask.total != w.member_count:
        raise ValueError("mask total does not match the member count")
    s_inv = spd_inverse(frame_operator(w))
    err = np.zeros((w.ambient_dim, w.ambient_dim))
    for i in sorted(mask.erased):
        ws, ww = w.member(i)
        vs, vw = v.member(i)
        err += ww * vw * projector(vs) @ s_inv @ projector(ws)
    return err


def fusion_partial_error(pair: DualPair, mask: ErasureMask, norm_kind: NormKind) -> float:
    """Error norm for one fixed, known erasure set (no max over subsets)."""
    return matrix_norm(fusion_error_operator(pair, mask), norm_kind)


def _worst_report(total: int, r: int, value_of, norm_kind: NormKind) -> ErasureReport:
    if not 1 <= r < total:
        raise ValueError(f"r must satisfy 1 <= r < {total}, got {r}")
    count = math.comb(total, r)
    if count > ENUMERATION_CAP:
        raise ValueError(
            f"C({total},{r}) = {count} subsets exceeds the enumeration cap "
            f"{ENUMERATION_CAP}; refusing to sample"
        )
    table: list[tuple[tuple[int, ...], float]] = []
    worst = -1.0
    for subset in itertools.combinations(range(1, total + 1), r):
        value = value_of(subset)
        table.append((subset, value))
        if value > worst:
            worst = value
    argmax = tuple(s for s, v in table if v >= worst * (1.0 - _TIE_REL))
    return ErasureReport(
        r=r,
        norm_kind=norm_kind,
        worst_value=worst,
        argmax_subsets=argmax,
        per_subset_values=tuple(table) if len(table) <= 4096 else None,
    )


def worst_case_error(
    pair: DualPair, r: int, norm_kind: NormKind, tol: Tolerance = DEFAULT_TOL
) -> ErasureReport:
    """Exhaustive worst error over all C(m, r) member subsets of the pair."""
    m = pair.member_count
    w = pair.primal
    v = pair.dual_candidate
    s_inv = spd_inverse(frame_operator(w), tol)
    components = []
    for i in range(1, m + 1):
        ws, ww = w.member(i)
        vs, vw = v.member(i)
        components.append(ww * vw * projector(vs) @ s_inv @ projector(ws))

    def value_of(subset: tuple[int, ...]) -> float:
        err = np.zeros((w.ambient_dim, w.ambient_dim))
        for i in subset:
            err += components[i - 1]
        return matrix_norm(err, norm_kind)

    return _worst_report(m, r, value_of, norm_kind)


def discrete_error_operator(
    f: DiscreteFrame, g: DiscreteFrame, mask: ErasureMask
) -> np.ndarray:
    """sum over erased k of g_k f_k^T."""
    if f.count != g.count:
        raise ValueError(f"frame lengths differ: {f.count} vs {g.count}")
    if mask.total != f.count:
        raise ValueError("mask total does not match the frame length")
    err = np.zeros((f.ambient_dim, f.ambient_dim))
    for k in sorted(mask.erased):
        err += np.outer(g.vector(k), f.vector(k))
    return err


def discrete_worst_case(
    f: DiscreteFrame,
    g: DiscreteFrame,
    r: int,
    norm_kind: NormKind,
    tol: Tolerance = DEFAULT_TOL,
) -> ErasureReport:
    """Exhaustive worst error over all C(m, r) vector subsets."""
    if f.count != g.count:
        raise ValueError(f"frame lengths differ: {f.count} vs {g.count}")

    def value_of(subset: tuple[int, ...]) -> float:
        err = np.zeros((f.ambient_dim, f.ambient_dim))
        for k in subset:
            err += np.outer(g.vector(k), f.vector(k))
        return matrix_norm(err, norm_kind)

    return _worst_report(f.count, r, value_of, norm_kind)


def partial_erasure_error(
    f: DiscreteFrame, g: DiscreteFrame, mask: ErasureMask, norm_kind: NormKind
) -> float:
    """Error norm for one fixed, known erasure set of vectors."""
    return matrix_norm(discrete_error_operator(f, g, mask), norm_kind)
