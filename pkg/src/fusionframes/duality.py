"""Duality of fusion frames: verification, component-preserving checks, lifting.

A candidate family (V, v) is a dual of (W, w) when the reconstruction map
sum_i w_i v_i proj_{V_i} S_W^{-1} proj_{W_i} equals the identity. Candidates
need not themselves be fusion frames (zero members are allowed); the
verification residual is the only duality authority.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .fusion import FusionFrame, canonical_dual, classify, frame_operator
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    image_subspace,
    projector,
    spd_inverse,
    subspace_contains,
    subspaces_equal,
)

__all__ = [
    "DualPair",
    "LeftInverseMap",
    "make_dual_pair",
    "canonical_pair",
    "verify_dual",
    "reconstruction_matrix",
    "riesz_dual_family_check",
    "left_inverse_residual",
    "component_preserving_check",
    "lift_to_component_preserving",
]


@dataclass(frozen=True, eq=False)
class DualPair:
    """A fusion frame together with a candidate dual family.

    ``duality_residual`` is the Frobenius distance of the reconstruction map
    from the identity; ``reconstruction`` caches the map for diagnostics.
    """

    primal: FusionFrame
    dual_candidate: FusionFrame
    duality_residual: float
    reconstruction: np.ndarray

    @property
    def member_count(self) -> int:
        return self.primal.member_count


def reconstruction_matrix(
    primal: FusionFrame, dual_candidate: FusionFrame, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """sum_i w_i v_i proj_{V_i} S_W^{-1} proj_{W_i} as a dense matrix."""
    if primal.member_count != dual_candidate.member_count:
        raise ValueError(
            f"member counts differ: {primal.member_count} vs {dual_candidate.member_count}"
        )
    if primal.ambient_dim != dual_candidate.ambient_dim:
        raise ValueError("ambient dimension mismatch between primal and dual")
    s_inv = spd_inverse(frame_operator(primal), tol)
    recon = np.zeros((primal.ambient_dim, primal.ambient_dim))
    for (ws, ww), (vs, vw) in zip(
        zip(primal.subspaces, primal.weights),
        zip(dual_candidate.subspaces, dual_candidate.weights),
    ):
        recon += ww * vw * projector(vs) @ s_inv @ projector(ws)
    return recon


def make_dual_pair(
    primal: FusionFrame, dual_candidate: FusionFrame, tol: Tolerance = DEFAULT_TOL
) -> DualPair:
    recon = reconstruction_matrix(primal, dual_candidate, tol)
    residual = float(np.linalg.norm(recon - np.eye(primal.ambient_dim), "fro"))
    return DualPair(primal, dual_candidate, residual, recon)


def canonical_pair(w: FusionFrame, tol: Tolerance = DEFAULT_TOL) -> DualPair:
    """The frame paired with its canonical dual."""
    return make_dual_pair(w, canonical_dual(w, tol), tol)


def verify_dual(pair: DualPair, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float, np.ndarray]:
    """Returns (passed, residual, reconstruction matrix)."""
    return pair.duality_residual <= tol.residual_eps, pair.duality_residual, pair.reconstruction


def riesz_dual_family_check(
    w: FusionFrame, v: FusionFrame, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """For a Riesz fusion basis, duality is containment: S_W^{-1} W_i inside V_i.

    Cross-checks the reconstruction residual whenever the containment holds;
    a disagreement would indicate a numerical inconsistency and raises.
    """
    if not classify(w, tol).is_riesz_fusion_basis:
        raise ValueError("the primal family is not a Riesz fusion basis")
    if w.member_count != v.member_count:
        raise ValueError("member counts differ")
    s_inv = spd_inverse(frame_operator(w), tol)
    contained = all(
        subspace_contains(vs, image_subspace(s_inv, ws, tol), tol)
        for ws, vs in zip(w.subspaces, v.subspaces)
    )
    if contained:
        ok, residual, _ = verify_dual(make_dual_pair(w, v, tol), tol)
        if not ok:
            raise ArithmeticError(
                f"containment holds but the duality residual is {residual:.3e}"
            )
    return contained


@dataclass(frozen=True, eq=False)
class LeftInverseMap:
    """A left inverse of the analysis map, stored as one n x n block per member.

    Applied as f -> sum_i block_i (w_i proj_{W_i} f); the left-inverse
    property is sum_i block_i w_i proj_{W_i} = I. Masking members amounts to
    zeroing blocks.
    """

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        blocks = tuple(np.asarray(b, dtype=float) for b in self.blocks)
        if not blocks:
            raise ValueError("at least one block is required")
        n = blocks[0].shape[0]
        for b in blocks:
            if b.shape != (n, n):
                raise ValueError("all blocks must be square with equal size")
        object.__setattr__(self, "blocks", blocks)


def left_inverse_residual(a: LeftInverseMap, w: FusionFrame) -> float:
    """Frobenius distance of sum_i block_i w_i proj_{W_i} from the identity."""
    if len(a.blocks) != w.member_count:
        raise ValueError("block count does not match the member count")
    total = np.zeros((w.ambient_dim, w.ambient_dim))
    for block, sub, weight in zip(a.blocks, w.subspaces, w.weights):
        total += block @ (weight * projector(sub))
    return float(np.linalg.norm(total - np.eye(w.ambient_dim), "fro"))


def component_preserving_check(
    w: FusionFrame,
    v: FusionFrame,
    a: LeftInverseMap,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """True iff block_j maps W_j onto V_j (mutual containment) for every j."""
    residual = left_inverse_residual(a, w)
    if residual > tol.residual_eps:
        raise ValueError(
            f"the map is not a left inverse of the analysis operator (residual {residual:.3e})"
        )
    if v.member_count != w.member_count:
        raise ValueError("member counts differ")
    for block, ws, vs in zip(a.blocks, w.subspaces, v.subspaces):
        if not subspaces_equal(image_subspace(block, ws, tol), vs, tol):
            return False
    return True


def lift_to_component_preserving(pair: DualPair, tol: Tolerance = DEFAULT_TOL) -> FusionFrame:
    """Replace each dual member by the image of S_W^{-1} W_i under proj_{V_i}.

    The lifted family keeps the dual weights, is again a valid dual, and has
    exactly the same per-component error operators as the input pair.
    """
    ok, residual, _ = verify_dual(pair, tol)
    if not ok:
        raise ValueError(f"pair is not a verified dual (residual {residual:.3e})")
    s_inv = spd_inverse(frame_operator(pair.primal), tol)
    lifted = []
    for ws, vs in zip(pair.primal.subspaces, pair.dual_candidate.subspaces):
        lifted.append(image_subspace(projector(vs) @ s_inv, ws, tol))
    return FusionFrame(pair.primal.ambient_dim, tuple(lifted), pair.dual_candidate.weights)
