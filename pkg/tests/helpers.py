"""Shared fixture builders for the test suite.

The named frames here are the bundled worked examples: an overlapping-plane
frame in R^4 whose canonical dual is certified optimal, an orthonormal
fusion basis in R^3 that bridges to an overcomplete Parseval frame, an
overcomplete frame in R^3 whose bridged canonical dual fails partial
optimality for two erasures, and a component-preserving pair that is not a
dual.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from fusionframes import (
    DualPerturbation,
    FusionFrame,
    coordinate_subspace,
    classify,
    frame_operator,
    fusion_frame,
    image_subspace,
    orthonormal_basis,
    spd_inverse,
    subspace_sum,
    synthesis_nullspace,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SQRT54 = np.sqrt(5.0 / 4.0)


def overlap_frame_r4() -> FusionFrame:
    """Two overlapping coordinate planes plus a line in R^4; bounds (1, 2)."""
    return fusion_frame(
        [
            coordinate_subspace(4, [1, 2]),
            coordinate_subspace(4, [2, 3]),
            coordinate_subspace(4, [4]),
        ]
    )


def overlap_extended_dual(xi) -> FusionFrame:
    """The seven-parameter family of optimal duals of the overlap frame."""
    x = np.asarray(xi, dtype=float)
    v1 = orthonormal_basis([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, x[0], x[1]]])
    v2 = orthonormal_basis([[0, 1, 0, 0], [0, 0, 1, 0], [x[2], 0, 0, x[3]]])
    v3 = orthonormal_basis([[0, 0, 0, 1], [x[4], x[5], x[6], 0]])
    return fusion_frame([v1, v2, v3])


def orthobasis_frame_r3() -> FusionFrame:
    """Orthonormal fusion basis of R^3: a line and its orthogonal plane."""
    return fusion_frame(
        [
            orthonormal_basis([[1, 0, 1]]),
            orthonormal_basis([[-1, 0, 1], [0, 1, 0]]),
        ]
    )


def orthobasis_alt_dual() -> FusionFrame:
    return fusion_frame(
        [
            orthonormal_basis([[1, 0, 1], [1, 0, -1]]),
            orthonormal_basis([[-1, 0, 1], [0, 1, 0]]),
        ]
    )


# nonzero rows of the bridged orthobasis frame, in (i, j) order
ORTHOBASIS_BRIDGED = np.array(
    [
        [0.5, 0, 0.5],
        [0.5, 0, 0.5],
        [0.5, 0, -0.5],
        [0, 1, 0],
        [-0.5, 0, 0.5],
    ]
)

ORTHOBASIS_ALT_DUAL_BRIDGED = np.array(
    [
        [1, 0, 0],
        [0, 0, 1],
        [0.5, 0, -0.5],
        [0, 1, 0],
        [-0.5, 0, 0.5],
    ]
)


def overcomplete_frame_r3() -> FusionFrame:
    """Plane + contained line + tilted plane in R^3; bridges to seven vectors."""
    return fusion_frame(
        [
            coordinate_subspace(3, [1, 2]),
            coordinate_subspace(3, [2]),
            orthonormal_basis([[0, 0, 1], [1, -1, 0]]),
        ]
    )


OVERCOMPLETE_SINV = np.array([[5, 1, 0], [1, 3, 0], [0, 0, 7]]) / 7.0

OVERCOMPLETE_BRIDGED = (
    np.array(
        [
            [5, 1, 0],
            [1, 3, 0],
            [0, 1, 0],
            [0, 3, 0],
            [2, -2, 0],
            [-1, 1, 0],
            [0, 0, 7],
        ]
    )
    / 7.0
)

# the valid dual displayed alongside the bridged frame (projections of the
# standard basis onto the canonical dual members)
OVERCOMPLETE_MEMBER_DUAL = np.array(
    [
        [1, 0, 0],
        [0, 1, 0],
        [0.1, 0.3, 0],
        [0.3, 0.9, 0],
        [0.8, -0.4, 0],
        [-0.4, 0.2, 0],
        [0, 0, 1],
    ]
)


def preserving_pair_r3():
    """Component-preserving triple (frame, candidate dual, blocks) that is not a dual."""
    w = fusion_frame(
        [
            coordinate_subspace(3, [2, 3]),
            coordinate_subspace(3, [1, 3]),
        ]
    )
    v = fusion_frame(
        [
            orthonormal_basis([[0, 1, 0], [1, 2, -0.5]]),
            orthonormal_basis([[1, 0, 0], [-1, -2, 1.5]]),
        ]
    )
    blocks = (
        np.array([[0, 0, 1], [0, 1, 2], [0, 0, -0.5]]),
        np.array([[1, 0, -1], [0, 0, -2], [0, 0, 1.5]]),
    )
    return w, v, blocks


PRESERVING_RECON = np.array([[1, 0, -0.2], [0, 1, -0.24], [0, 0, 0.28]])


# --- randomized generators ---------------------------------------------------


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_subspace(rng: np.random.Generator, n: int, k: int):
    return orthonormal_basis(rng.standard_normal((k, n)), ambient_dim=n)


def random_spd(rng: np.random.Generator, n: int, cond: float = 1e3) -> np.ndarray:
    q = random_unitary(rng, n)
    eigvals = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    return (q * eigvals) @ q.T


def random_fusion_frame(
    rng: np.random.Generator, n: int, m: int, weighted: bool = False
) -> FusionFrame:
    while True:
        dims = rng.integers(1, n, size=m)
        if dims.sum() < n:
            continue
        subs = [random_subspace(rng, n, int(k)) for k in dims]
        weights = 0.5 + 1.5 * rng.random(m) if weighted else None
        frame = fusion_frame(subs, weights)
        if classify(frame).is_frame:
            return frame


def random_riesz_basis(rng: np.random.Generator, n: int, parts: int) -> FusionFrame:
    """Random invertible image of an orthogonal decomposition into ``parts`` blocks."""
    if not 1 <= parts <= n:
        raise ValueError("parts must lie between 1 and the dimension")
    q = random_unitary(rng, n)
    mix = random_unitary(rng, n) @ np.diag(np.exp(rng.uniform(-0.5, 0.5, n))) @ random_unitary(rng, n)
    cuts = sorted(rng.choice(np.arange(1, n), size=parts - 1, replace=False)) if parts > 1 else []
    bounds = [0, *cuts, n]
    subs = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        cols = (mix @ q[:, lo:hi]).T
        subs.append(orthonormal_basis(cols, ambient_dim=n))
    return fusion_frame(subs)


def inflated_dual(rng: np.random.Generator, w: FusionFrame) -> FusionFrame:
    """Canonical dual with random extra directions orthogonal to each member."""
    from fusionframes import orthogonal_complement

    s_inv = spd_inverse(frame_operator(w))
    members = []
    for s in w.subspaces:
        can = image_subspace(s_inv, s)
        comp = orthogonal_complement(can)
        if comp.dim > 0 and rng.random() < 0.6:
            direction = comp.basis @ rng.standard_normal(comp.dim)
            members.append(subspace_sum([can, orthonormal_basis([direction])]))
        else:
            members.append(can)
    return FusionFrame(w.ambient_dim, tuple(members), w.weights)


def certified_random_frame(rng: np.random.Generator, n: int) -> FusionFrame:
    """Rotated template frame that the canonical certificate accepts.

    Two overlapping 2-dimensional members dominate the single-erasure error;
    the remaining directions enter as orthogonal singletons.
    """
    if n < 3:
        raise ValueError("needs dimension at least 3")
    u = random_unitary(rng, n)
    subs = [
        orthonormal_basis([u[:, 0], u[:, 1]]),
        orthonormal_basis([u[:, 1], u[:, 2]]),
    ]
    subs += [orthonormal_basis([u[:, k]]) for k in range(3, n)]
    return fusion_frame(subs)


def random_perturbation(rng: np.random.Generator, f, scale: float = 0.5) -> DualPerturbation:
    nullsp = synthesis_nullspace(f)
    coeff = scale * rng.standard_normal((nullsp.shape[1], f.ambient_dim))
    return DualPerturbation(nullsp @ coeff)
