"""Discrete frames, their duals, and the fusion-to-discrete bridge.

Bridged frames carry one vector per (member, basis-direction) pair, with
1-based ``(i, j)`` labels recording provenance. Zero vectors produced by the
bridge are kept so that block erasure masks line up with the labels; reports
can render a compacted view via :func:`compact_nonzero`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .fusion import FusionFrame, frame_operator
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    image_subspace,
    projector,
    spd_inv_sqrt,
    spd_inverse,
)

__all__ = [
    "DiscreteFrame",
    "DualPerturbation",
    "discrete_frame",
    "discrete_frame_operator",
    "discrete_canonical_dual",
    "verify_discrete_dual",
    "perturbation_residual",
    "dual_from_perturbation",
    "synthesis_nullspace",
    "bridge_fusion_to_discrete",
    "bridge_dual_to_discrete",
    "compact_nonzero",
    "halving_perturbation",
    "halving_dual",
]

BridgeMode = Literal["canonical_weighted", "parseval_sqrt"]


@dataclass(frozen=True, eq=False)
class DiscreteFrame:
    """Finite vector family in R^ambient_dim; rows of ``vectors`` are the frame vectors."""

    ambient_dim: int
    vectors: np.ndarray
    labels: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.ambient_dim:
            raise ValueError(f"vectors must form an m x {self.ambient_dim} array, got {v.shape}")
        if v.size and not np.all(np.isfinite(v)):
            raise ValueError("frame vectors have non-finite entries")
        if self.labels is not None and len(self.labels) != v.shape[0]:
            raise ValueError("label count does not match vector count")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple((int(i), int(j)) for i, j in self.labels))

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def vector(self, k: int) -> np.ndarray:
        """Vector ``k`` (1-based)."""
        if not 1 <= k <= self.count:
            raise ValueError(f"vector index {k} out of range 1..{self.count}")
        return self.vectors[k - 1]


def discrete_frame(vectors: Sequence, labels=None) -> DiscreteFrame:
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim != 2:
        raise ValueError("expected a sequence of equal-length vectors")
    return DiscreteFrame(arr.shape[1], arr, labels)


@dataclass(frozen=True, eq=False)
class DualPerturbation:
    """Additive perturbation {u_k} of the canonical dual.

    Valid exactly when the synthesis of the perturbation against the frame
    vanishes: sum_k u_k f_k^T = 0.
    """

    u_vectors: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u_vectors, dtype=float)
        if u.ndim != 2:
            raise ValueError("perturbation must be an m x n array")
        if u.size and not np.all(np.isfinite(u)):
            raise ValueError("perturbation has non-finite entries")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "u_vectors", u)


def discrete_frame_operator(f: DiscreteFrame) -> np.ndarray:
    """S_F = sum of f_k f_k^T."""
    return f.vectors.T @ f.vectors


def discrete_canonical_dual(f: DiscreteFrame, tol: Tolerance = DEFAULT_TOL) -> DiscreteFrame:
    """Canonical dual {S_F^{-1} f_k}, labels preserved."""
    s_inv = spd_inverse(discrete_frame_operator(f), tol)
    return DiscreteFrame(f.ambient_dim, f.vectors @ s_inv, f.labels)


def verify_discrete_dual(
    f: DiscreteFrame, g: DiscreteFrame, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, float]:
    """Check sum g_k f_k^T = I; returns (passed, Frobenius residual)."""
    if f.count != g.count:
        raise ValueError(f"frame lengths differ: {f.count} vs {g.count}")
    if f.ambient_dim != g.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    recon = g.vectors.T @ f.vectors
    residual = float(np.linalg.norm(recon - np.eye(f.ambient_dim), "fro"))
    return residual <= tol.residual_eps, residual


def perturbation_residual(f: DiscreteFrame, u: DualPerturbation) -> float:
    """Frobenius norm of sum u_k f_k^T, zero for a valid perturbation."""
    if u.u_vectors.shape != f.vectors.shape:
        raise ValueError("perturbation shape does not match the frame")
    return float(np.linalg.norm(u.u_vectors.T @ f.vectors, "fro"))


def dual_from_perturbation(
    f: DiscreteFrame, u: DualPerturbation, tol: Tolerance = DEFAULT_TOL
) -> DiscreteFrame:
    """Dual {S_F^{-1} f_k + u_k}; rejects perturbations outside the synthesis nullspace."""
    residual = perturbation_residual(f, u)
    if residual > tol.residual_eps:
        raise ValueError(
            f"perturbation violates the dual relation (residual {residual:.3e})"
        )
    canonical = discrete_canonical_dual(f, tol)
    return DiscreteFrame(f.ambient_dim, canonical.vectors + u.u_vectors, f.labels)


def synthesis_nullspace(f: DiscreteFrame, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of {c : sum c_k f_k = 0}.

    Every valid perturbation has all of its coordinate columns in this space,
    so random duals are draws U = N C with arbitrary coefficient matrices C.
    """
    _, svals, vh = np.linalg.svd(f.vectors.T, full_matrices=True)
    scale = float(svals[0]) if svals.size else 0.0
    rank = int(np.sum(svals > tol.rank_eps * max(1.0, scale)))
    return vh[rank:].T


def _check_orthonormal_basis(basis: Sequence, ambient_dim: int, tol: Tolerance) -> np.ndarray:
    b = np.asarray(basis, dtype=float)
    if b.ndim != 2 or b.shape != (ambient_dim, ambient_dim):
        raise ValueError(
            f"basis must consist of {ambient_dim} vectors of length {ambient_dim}"
        )
    if np.linalg.norm(b @ b.T - np.eye(ambient_dim), "fro") > max(tol.residual_eps, 1e-9):
        raise ValueError("basis is not orthonormal")
    return b


def bridge_fusion_to_discrete(
    w: FusionFrame,
    basis: Sequence,
    mode: BridgeMode = "canonical_weighted",
    tol: Tolerance = DEFAULT_TOL,
) -> DiscreteFrame:
    """Turn a fusion frame into a labeled discrete frame over an orthonormal basis.

    ``canonical_weighted`` emits w_i * proj_{W_i} S_W^{-1} e_j over all (i, j);
    ``parseval_sqrt`` emits proj onto S_W^{-1/2} W_i of e_j and requires unit
    weights. Rows are ordered i-major, j-minor; labels are 1-based (i, j).
    """
    b = _check_orthonormal_basis(basis, w.ambient_dim, tol)
    s = frame_operator(w)
    rows: list[np.ndarray] = []
    labels: list[tuple[int, int]] = []
    if mode == "canonical_weighted":
        s_inv = spd_inverse(s, tol)
        for i, (sub, weight) in enumerate(zip(w.subspaces, w.weights), start=1):
            p = projector(sub)
            for j in range(1, w.ambient_dim + 1):
                rows.append(weight * (p @ (s_inv @ b[j - 1])))
                labels.append((i, j))
    elif mode == "parseval_sqrt":
        if any(abs(weight - 1.0) > tol.residual_eps for weight in w.weights):
            raise ValueError("parseval_sqrt mode requires unit weights")
        root_inv = spd_inv_sqrt(s, tol)
        for i, sub in enumerate(w.subspaces, start=1):
            p = projector(image_subspace(root_inv, sub, tol))
            for j in range(1, w.ambient_dim + 1):
                rows.append(p @ b[j - 1])
                labels.append((i, j))
    else:
        raise ValueError(f"unknown bridge mode {mode!r}")
    return DiscreteFrame(w.ambient_dim, np.vstack(rows), tuple(labels))


def bridge_dual_to_discrete(
    v: FusionFrame, basis: Sequence, tol: Tolerance = DEFAULT_TOL
) -> DiscreteFrame:
    """Emit v_i * proj_{V_i} e_j with labels aligned to :func:`bridge_fusion_to_discrete`."""
    b = _check_orthonormal_basis(basis, v.ambient_dim, tol)
    rows: list[np.ndarray] = []
    labels: list[tuple[int, int]] = []
    for i, (sub, weight) in enumerate(zip(v.subspaces, v.weights), start=1):
        p = projector(sub)
        for j in range(1, v.ambient_dim + 1):
            rows.append(weight * (p @ b[j - 1]))
            labels.append((i, j))
    return DiscreteFrame(v.ambient_dim, np.vstack(rows), tuple(labels))


def compact_nonzero(
    f: DiscreteFrame, tol: Tolerance = DEFAULT_TOL
) -> tuple[DiscreteFrame, tuple[int, ...]]:
    """Drop zero vectors; returns the compacted frame and the kept 1-based indices.

    Zero rows contribute nothing to any synthesis, so the compacted frame has
    the same frame operator and the same duality/erasure values.
    """
    scale = max(1.0, float(np.abs(f.vectors).max(initial=0.0)))
    kept = [k for k in range(f.count) if np.linalg.norm(f.vectors[k]) > tol.rank_eps * scale]
    labels = tuple(f.labels[k] for k in kept) if f.labels is not None else None
    return (
        DiscreteFrame(f.ambient_dim, f.vectors[kept], labels),
        tuple(k + 1 for k in kept),
    )


def halving_perturbation(
    f: DiscreteFrame, lost: Sequence[int], tol: Tolerance = DEFAULT_TOL
) -> DualPerturbation:
    """Perturbation that halves the canonical dual on the ``lost`` indices (1-based).

    Rows in ``lost`` are fixed to minus half the canonical dual vector; the
    remaining rows solve the dual relation by minimum-norm least squares.
    Raises when the fixed rows make the relation unsatisfiable (for instance
    when a lost vector is the only one supported on some coordinate).
    """
    lost_set = sorted(set(int(k) for k in lost))
    for k in lost_set:
        if not 1 <= k <= f.count:
            raise ValueError(f"lost index {k} out of range 1..{f.count}")
    canonical = discrete_canonical_dual(f, tol)
    u = np.zeros_like(f.vectors)
    lost_rows = [k - 1 for k in lost_set]
    free_rows = [k for k in range(f.count) if k not in set(lost_rows)]
    u[lost_rows] = -0.5 * canonical.vectors[lost_rows]
    # sum_k f_k u_k^T = 0  <=>  F_free^T U_free = -F_lost^T U_lost
    rhs = -f.vectors[lost_rows].T @ u[lost_rows]
    if free_rows:
        sol, *_ = np.linalg.lstsq(f.vectors[free_rows].T, rhs, rcond=None)
        u[free_rows] = sol
    residual = float(np.linalg.norm(f.vectors.T @ u, "fro"))
    if residual > tol.residual_eps:
        raise ValueError(
            "halving construction is infeasible for the lost set "
            f"{lost_set} (residual {residual:.3e})"
        )
    return DualPerturbation(u)


def halving_dual(
    f: DiscreteFrame, lost: Sequence[int], tol: Tolerance = DEFAULT_TOL
) -> DiscreteFrame:
    """Dual frame built from :func:`halving_perturbation`."""
    return dual_from_perturbation(f, halving_perturbation(f, lost, tol), tol)
