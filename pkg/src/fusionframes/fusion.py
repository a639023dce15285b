"""Fusion frames: construction, frame operator, bounds, classification, canonical dual.

A fusion frame is a weighted family of subspaces whose union spans the whole
space. Non-spanning families stay representable (the lower bound is reported
as 0) so callers can diagnose bad inputs instead of losing them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    image_subspace,
    projector,
    spd_inverse,
    subspace_sum,
)

__all__ = [
    "FusionFrame",
    "FrameClassification",
    "fusion_frame",
    "frame_operator",
    "frame_bounds",
    "classify",
    "canonical_dual",
    "riesz_constants",
    "is_nontrivial",
]


@dataclass(frozen=True, eq=False)
class FusionFrame:
    """Weighted subspace family {(W_i, w_i)} in R^ambient_dim.

    Indices are 1-based throughout the public API, matching the bundled
    worked examples.
    """

    ambient_dim: int
    subspaces: tuple[Subspace, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.subspaces:
            raise ValueError("a fusion frame needs at least one member")
        if len(self.subspaces) != len(self.weights):
            raise ValueError("subspace and weight counts differ")
        for i, (s, w) in enumerate(zip(self.subspaces, self.weights), start=1):
            if s.ambient_dim != self.ambient_dim:
                raise ValueError(f"member {i} lives in R^{s.ambient_dim}, expected R^{self.ambient_dim}")
            if not w > 0:
                raise ValueError(f"weight of member {i} must be positive, got {w}")
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def member_count(self) -> int:
        return len(self.subspaces)

    @cached_property
    def spans_ambient(self) -> bool:
        return subspace_sum(self.subspaces).dim == self.ambient_dim

    def member(self, i: int) -> tuple[Subspace, float]:
        """Member ``i`` (1-based) as a (subspace, weight) pair."""
        if not 1 <= i <= self.member_count:
            raise ValueError(f"member index {i} out of range 1..{self.member_count}")
        return self.subspaces[i - 1], self.weights[i - 1]

    def replace_member(self, i: int, subspace: Subspace) -> "FusionFrame":
        """Copy with member ``i`` (1-based) swapped for ``subspace``."""
        self.member(i)
        subs = list(self.subspaces)
        subs[i - 1] = subspace
        return FusionFrame(self.ambient_dim, tuple(subs), self.weights)


def fusion_frame(
    subspaces: Sequence[Subspace], weights: Sequence[float] | None = None
) -> FusionFrame:
    """Build a fusion frame; weights default to 1 for every member."""
    if weights is None:
        weights = [1.0] * len(subspaces)
    if not subspaces:
        raise ValueError("a fusion frame needs at least one member")
    return FusionFrame(subspaces[0].ambient_dim, tuple(subspaces), tuple(weights))


@dataclass(frozen=True)
class FrameClassification:
    is_frame: bool
    lower_bound: float
    upper_bound: float
    is_tight: bool
    is_parseval: bool
    is_riesz_fusion_basis: bool
    is_orthonormal_fusion_basis: bool


def frame_operator(w: FusionFrame) -> np.ndarray:
    """S_W = sum of w_i^2 * (projector onto W_i); symmetric positive semidefinite."""
    s = np.zeros((w.ambient_dim, w.ambient_dim))
    for sub, weight in zip(w.subspaces, w.weights):
        s += weight**2 * projector(sub)
    return s


def frame_bounds(w: FusionFrame, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Optimal bounds (A, B) as the extreme eigenvalues of the frame operator.

    A is clamped to exactly 0 when it is not numerically positive; A > 0 is
    equivalent to the family being a frame.
    """
    eigvals = np.linalg.eigvalsh(frame_operator(w))
    lower = float(eigvals[0])
    upper = float(eigvals[-1])
    if lower <= tol.rank_eps:
        lower = 0.0
    if upper <= tol.rank_eps:
        upper = 0.0
    return lower, upper


def classify(w: FusionFrame, tol: Tolerance = DEFAULT_TOL) -> FrameClassification:
    """Classify a weighted subspace family.

    The Riesz test uses the finite-dimensional criterion: the family spans
    and the member dimensions add up to the ambient dimension (the sum is
    then direct). Orthonormal additionally requires pairwise orthogonal
    members and unit weights.
    """
    lower, upper = frame_bounds(w, tol)
    is_frame = lower > 0.0
    scale = max(1.0, upper)
    is_tight = is_frame and (upper - lower) <= tol.residual_eps * scale
    is_parseval = is_tight and abs(lower - 1.0) <= tol.residual_eps and abs(upper - 1.0) <= tol.residual_eps
    dims_add_up = sum(s.dim for s in w.subspaces) == w.ambient_dim
    is_riesz = is_frame and dims_add_up
    is_orthonormal = False
    if is_riesz:
        unit_weights = all(abs(weight - 1.0) <= tol.residual_eps for weight in w.weights)
        pairwise_orthogonal = True
        projectors = [projector(s) for s in w.subspaces]
        for i in range(len(projectors)):
            for j in range(i + 1, len(projectors)):
                if np.linalg.norm(projectors[i] @ projectors[j], "fro") > tol.residual_eps:
                    pairwise_orthogonal = False
                    break
            if not pairwise_orthogonal:
                break
        is_orthonormal = unit_weights and pairwise_orthogonal
    return FrameClassification(
        is_frame=is_frame,
        lower_bound=lower,
        upper_bound=upper,
        is_tight=is_tight,
        is_parseval=is_parseval,
        is_riesz_fusion_basis=is_riesz,
        is_orthonormal_fusion_basis=is_orthonormal,
    )


def canonical_dual(w: FusionFrame, tol: Tolerance = DEFAULT_TOL) -> FusionFrame:
    """Canonical dual family {(S_W^{-1} W_i, w_i)}; member dimensions are preserved."""
    if not classify(w, tol).is_frame:
        raise ValueError("canonical dual requires a fusion frame (family does not span)")
    s_inv = spd_inverse(frame_operator(w), tol)
    duals = tuple(image_subspace(s_inv, sub, tol) for sub in w.subspaces)
    return FusionFrame(w.ambient_dim, duals, w.weights)


def riesz_constants(w: FusionFrame) -> tuple[float, float]:
    """Riesz bounds of the unweighted family via the block synthesis map.

    Stacks all member bases into one matrix and returns the squared extreme
    singular values; for an orthonormal fusion basis both equal 1.
    """
    blocks = [s.basis for s in w.subspaces if s.dim > 0]
    if not blocks:
        return 0.0, 0.0
    synthesis = np.hstack(blocks)
    svals = np.linalg.svd(synthesis, compute_uv=False)
    smin = float(svals[-1]) if synthesis.shape[1] <= synthesis.shape[0] else 0.0
    return smin**2, float(svals[0]) ** 2


def is_nontrivial(w: FusionFrame) -> bool:
    """True when some member is a proper subspace of the ambient space."""
    return any(s.dim < w.ambient_dim for s in w.subspaces)
