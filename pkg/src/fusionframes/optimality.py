"""Optimality certificates and constructive optimal-dual families.

Optimality is certified through sufficient conditions or refuted by
exhibiting a better dual from a probe family; nothing here ever claims
global optimality from search alone, since the set of duals is infinite.
A certificate verdict of ``not_applicable`` means the hypotheses failed,
not that the dual is suboptimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrete import (
    DiscreteFrame,
    DualPerturbation,
    bridge_dual_to_discrete,
    bridge_fusion_to_discrete,
    discrete_canonical_dual,
    dual_from_perturbation,
    verify_discrete_dual,
)
from .duality import (
    DualPair,
    canonical_pair,
    lift_to_component_preserving,
    make_dual_pair,
    verify_dual,
)
from .erasures import (
    block_mask,
    discrete_worst_case,
    partial_erasure_error,
    worst_case_error,
)
from .fusion import (
    FusionFrame,
    classify,
    frame_operator,
    fusion_frame,
    is_nontrivial,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    frobenius_norm,
    image_subspace,
    orthogonal_complement,
    projector,
    spd_inv_sqrt,
    spd_inverse,
    subspace_contains,
    subspace_intersection,
    subspace_sum,
    subspaces_equal,
    zero_subspace,
)

__all__ = [
    "Certificate",
    "certify_canonical_optimal",
    "certify_dual_optimal",
    "certify_tight_uniform",
    "expand_optimal_family",
    "parseval_optimal_family",
    "riesz_bridge_partial_optimal",
    "transport_by_unitary",
    "transport_by_invertible",
    "probe_duals",
]

_TIE_REL = 1e-12


@dataclass(frozen=True, eq=False)
class Certificate:
    """Outcome of a sufficient-condition optimality check.

    ``lambda1`` collects the members attaining the extremal single-erasure
    value ``c_value``; ``lambda2`` is the rest. ``lambda_side_riesz`` is True
    when the Riesz hypothesis was checked on the lambda1 side (dual-family
    certificate) and False when on the lambda2 side (canonical certificate).
    """

    kind: str
    c_value: float
    lambda1: tuple[int, ...]
    lambda2: tuple[int, ...]
    h1_dim: int
    h2_dim: int
    intersection_dim: int
    lambda_side_riesz: bool
    verdict: str
    notes: str

    @property
    def certified(self) -> bool:
        return self.verdict == "certified_optimal"


def _argmax_split(values: Sequence[float]) -> tuple[float, tuple[int, ...], tuple[int, ...]]:
    c = max(values)
    lambda1 = tuple(i for i, v in enumerate(values, start=1) if v >= c * (1.0 - _TIE_REL))
    lambda2 = tuple(i for i in range(1, len(values) + 1) if i not in lambda1)
    return float(c), lambda1, lambda2


def _span_of_members(w: FusionFrame, indices: Sequence[int]) -> Subspace:
    return subspace_sum([w.subspaces[i - 1] for i in indices], ambient_dim=w.ambient_dim)


def _nontriviality_note(w: FusionFrame) -> str:
    return "nontrivial fusion frame" if is_nontrivial(w) else "trivial fusion frame (some member is the whole space)"


def certify_canonical_optimal(w: FusionFrame, tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """Certify the canonical dual as a 1-loss optimal dual.

    Hypotheses checked: the spans of the extremal and non-extremal members
    intersect trivially, and the non-extremal members form a Riesz fusion
    basis of their span (dimension count). When both hold the canonical dual
    is optimal, though never the unique one.
    """
    if not classify(w, tol).is_frame:
        raise ValueError("certificate requires a fusion frame (family does not span)")
    s_inv = spd_inverse(frame_operator(w), tol)
    values = [
        weight**2 * frobenius_norm(s_inv @ projector(sub))
        for sub, weight in zip(w.subspaces, w.weights)
    ]
    c, lambda1, lambda2 = _argmax_split(values)
    h1 = _span_of_members(w, lambda1)
    h2 = _span_of_members(w, lambda2)
    inter = subspace_intersection(h1, h2, tol)
    dims_add = sum(w.subspaces[i - 1].dim for i in lambda2) == h2.dim
    certified = inter.dim == 0 and dims_add
    reasons = []
    if inter.dim > 0:
        reasons.append(f"extremal and complementary spans overlap ({inter.dim}-dimensional)")
    if not dims_add:
        reasons.append("complementary members do not sum directly in their span")
    notes = "; ".join(reasons) if reasons else "canonical dual certified 1-loss optimal (not unique)"
    return Certificate(
        kind="canonical",
        c_value=c,
        lambda1=lambda1,
        lambda2=lambda2,
        h1_dim=h1.dim,
        h2_dim=h2.dim,
        intersection_dim=inter.dim,
        lambda_side_riesz=False,
        verdict="certified_optimal" if certified else "not_applicable",
        notes=f"{notes}; {_nontriviality_note(w)}",
    )


def certify_dual_optimal(pair: DualPair, tol: Tolerance = DEFAULT_TOL) -> Certificate:
    """Certify a verified dual pair as 1-loss optimal.

    Unlike the canonical certificate, the Riesz hypothesis here sits on the
    extremal side: the members attaining the worst single-erasure value must
    form a Riesz fusion basis of their span, and that span must intersect
    the complementary span trivially.
    """
    ok, residual, _ = verify_dual(pair, tol)
    if not ok:
        raise ValueError(f"pair is not a verified dual (residual {residual:.3e})")
    w = pair.primal
    v = pair.dual_candidate
    s_inv = spd_inverse(frame_operator(w), tol)
    values = [
        ww * vw * frobenius_norm(projector(vs) @ s_inv @ projector(ws))
        for (ws, ww), (vs, vw) in zip(
            zip(w.subspaces, w.weights), zip(v.subspaces, v.weights)
        )
    ]
    c, lambda1, lambda2 = _argmax_split(values)
    h1 = _span_of_members(w, lambda1)
    h2 = _span_of_members(w, lambda2)
    inter = subspace_intersection(h1, h2, tol)
    dims_add = sum(w.subspaces[i - 1].dim for i in lambda1) == h1.dim
    certified = inter.dim == 0 and dims_add
    reasons = []
    if not dims_add:
        reasons.append("extremal members do not sum directly in their span")
    if inter.dim > 0:
        reasons.append(f"extremal and complementary spans overlap ({inter.dim}-dimensional)")
    notes = "; ".join(reasons) if reasons else "dual family certified 1-loss optimal"
    return Certificate(
        kind="dual_family",
        c_value=c,
        lambda1=lambda1,
        lambda2=lambda2,
        h1_dim=h1.dim,
        h2_dim=h2.dim,
        intersection_dim=inter.dim,
        lambda_side_riesz=True,
        verdict="certified_optimal" if certified else "not_applicable",
        notes=f"{notes}; {_nontriviality_note(w)}",
    )


def certify_tight_uniform(
    w: FusionFrame, v: FusionFrame, tol: Tolerance = DEFAULT_TOL
) -> Certificate:
    """Certify every mildly-weighted dual of a tight frame with uniform member size.

    Requires: w tight, w_i^2 * sqrt(dim W_i) constant across members, v a
    verified dual, and max(v_i / w_i) <= 1. The certified dual's worst
    single-erasure Frobenius error is recorded in the notes together with
    the bound c / alpha.
    """
    cls = classify(w, tol)
    reasons = []
    alpha = cls.lower_bound
    if not cls.is_frame:
        raise ValueError("certificate requires a fusion frame (family does not span)")
    if not cls.is_tight:
        reasons.append(f"frame is not tight (bounds {cls.lower_bound:.6g}, {cls.upper_bound:.6g})")
    member_values = [
        weight**2 * np.sqrt(sub.dim) for sub, weight in zip(w.subspaces, w.weights)
    ]
    c = float(max(member_values))
    spread = c - float(min(member_values))
    if spread > tol.residual_eps * max(1.0, c):
        reasons.append("member value w_i^2 sqrt(dim W_i) is not constant")
    pair = make_dual_pair(w, v, tol)
    ok, residual, _ = verify_dual(pair, tol)
    if not ok:
        reasons.append(f"dual verification failed (residual {residual:.3e})")
    if w.member_count != v.member_count:
        raise ValueError("member counts differ")
    ratio = max(vw / ww for ww, vw in zip(w.weights, v.weights))
    if ratio > 1.0 + tol.residual_eps:
        reasons.append(f"max dual/primal weight ratio {ratio:.6g} exceeds 1")
    certified = not reasons
    if certified:
        note = f"certified; bound c/alpha = {c / alpha:.12g}"
        if w.member_count >= 2:
            d1 = worst_case_error(pair, 1, "frobenius", tol).worst_value
            note += f"; worst single-erasure Frobenius error {d1:.12g}"
    else:
        note = "; ".join(reasons)
    m = w.member_count
    return Certificate(
        kind="tight_uniform",
        c_value=c,
        lambda1=tuple(range(1, m + 1)),
        lambda2=(),
        h1_dim=w.ambient_dim,
        h2_dim=0,
        intersection_dim=0,
        lambda_side_riesz=False,
        verdict="certified_optimal" if certified else "not_applicable",
        notes=f"{note}; {_nontriviality_note(w)}",
    )


def expand_optimal_family(
    pair: DualPair, i: int, tol: Tolerance = DEFAULT_TOL, check_r_max: int = 2
) -> list[FusionFrame]:
    """All single-member rewrites of an optimal dual that keep every erasure value.

    At member ``i`` (1-based) this emits, when applicable: the zero-member
    variant (dual member equals the complement of the canonical member), the
    trimmed variant (complement properly contained in the dual member), and
    one enlarged variant per direction orthogonal to both the dual member and
    the canonical member. Every emitted family is re-verified as a dual and
    its worst-case reports are checked against the input for r up to
    ``check_r_max``; an empty list means no variant applies.
    """
    ok, residual, _ = verify_dual(pair, tol)
    if not ok:
        raise ValueError(f"pair is not a verified dual (residual {residual:.3e})")
    w = pair.primal
    v = pair.dual_candidate
    ws, _ = w.member(i)
    vs, _ = v.member(i)
    s_inv = spd_inverse(frame_operator(w), tol)
    canonical_i = image_subspace(s_inv, ws, tol)
    comp = orthogonal_complement(canonical_i)

    variants: list[FusionFrame] = []
    if comp.dim > 0 and subspace_contains(vs, comp, tol):
        if subspaces_equal(comp, vs, tol):
            variants.append(v.replace_member(i, zero_subspace(w.ambient_dim)))
        else:
            trimmed = subspace_intersection(canonical_i, vs, tol)
            variants.append(v.replace_member(i, trimmed))
    extension_room = subspace_intersection(orthogonal_complement(vs), comp, tol)
    for k in range(extension_room.dim):
        direction = Subspace(w.ambient_dim, extension_room.basis[:, k : k + 1])
        enlarged = subspace_sum([vs, direction])
        variants.append(v.replace_member(i, enlarged))

    m = w.member_count
    reference = {
        (r, kind): worst_case_error(pair, r, kind, tol).worst_value
        for r in range(1, min(check_r_max, m - 1) + 1)
        for kind in ("frobenius", "operator")
    }
    for variant in variants:
        new_pair = make_dual_pair(w, variant, tol)
        ok, residual, _ = verify_dual(new_pair, tol)
        if not ok:
            raise ArithmeticError(f"emitted variant failed dual verification ({residual:.3e})")
        for (r, kind), value in reference.items():
            got = worst_case_error(new_pair, r, kind, tol).worst_value
            if abs(got - value) > 1e-9 * max(1.0, value):
                raise ArithmeticError(
                    f"emitted variant changed the worst {kind} error for r={r}: "
                    f"{got!r} vs {value!r}"
                )
    return variants


def _pick_and_complete_basis(
    members: Sequence[Subspace], ambient_dim: int, tol: Tolerance
) -> np.ndarray:
    """One normalized representative per member, completed to an orthonormal basis.

    The representative of each member is the projection of the first standard
    basis direction that meets it; completion runs over the standard basis in
    index order. Deterministic so constructed fixtures are reproducible.
    """
    eye = np.eye(ambient_dim)
    chosen: list[np.ndarray] = []
    for s in members:
        p = projector(s)
        for k in range(ambient_dim):
            cand = p @ eye[k]
            norm = float(np.linalg.norm(cand))
            if norm > tol.rank_eps:
                chosen.append(cand / norm)
                break
        else:
            raise ValueError("a member has no nonzero projection of any coordinate direction")
    basis = list(chosen)
    for k in range(ambient_dim):
        if len(basis) == ambient_dim:
            break
        v = eye[k].copy()
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        norm = float(np.linalg.norm(v))
        if norm > tol.rank_eps:
            basis.append(v / norm)
    if len(basis) != ambient_dim:
        raise ArithmeticError("basis completion failed")
    return np.vstack(basis)


def parseval_optimal_family(
    w: FusionFrame,
    extensions: Sequence[Subspace],
    tol: Tolerance = DEFAULT_TOL,
    basis: Sequence | None = None,
) -> tuple[DiscreteFrame, list[DiscreteFrame]]:
    """Parseval frame from a unit-weight Riesz fusion basis, with optimal duals.

    Emits F built from projections of an orthonormal basis onto the
    whitened members, plus two duals: the canonical dual of F and the dual
    built from ``extensions`` (members must contain the whitened subspaces).
    When ``basis`` is omitted it is constructed deterministically with one
    representative inside each whitened member, which guarantees the unit
    worst single-erasure error; an explicit basis is validated against the
    same property.
    """
    cls = classify(w, tol)
    if not cls.is_riesz_fusion_basis:
        raise ValueError("the family is not a Riesz fusion basis")
    if any(abs(weight - 1.0) > tol.residual_eps for weight in w.weights):
        raise ValueError("unit weights are required")
    if len(extensions) != w.member_count:
        raise ValueError("one extension subspace per member is required")
    root_inv = spd_inv_sqrt(frame_operator(w), tol)
    whitened = [image_subspace(root_inv, s, tol) for s in w.subspaces]
    for idx, (inner, outer) in enumerate(zip(whitened, extensions), start=1):
        if not subspace_contains(outer, inner, tol):
            raise ValueError(f"extension {idx} does not contain the whitened member")
    if basis is None:
        basis_arr = _pick_and_complete_basis(whitened, w.ambient_dim, tol)
    else:
        basis_arr = np.asarray(basis, dtype=float)
    f = bridge_fusion_to_discrete(w, basis_arr, "parseval_sqrt", tol)
    s_f = f.vectors.T @ f.vectors
    if np.linalg.norm(s_f - np.eye(w.ambient_dim), "fro") > max(tol.residual_eps, 1e-9):
        raise ArithmeticError("bridged frame is not Parseval")
    duals = [
        discrete_canonical_dual(f, tol),
        bridge_dual_to_discrete(fusion_frame(list(extensions)), basis_arr, tol),
    ]
    for g in duals:
        ok, residual = verify_discrete_dual(f, g, tol)
        if not ok:
            raise ArithmeticError(f"emitted dual failed verification (residual {residual:.3e})")
        d1 = discrete_worst_case(f, g, 1, "operator", tol).worst_value
        if abs(d1 - 1.0) > max(tol.residual_eps, 1e-9):
            raise ValueError(
                f"basis does not attain unit worst single-erasure error (got {d1!r})"
            )
    return f, duals


def riesz_bridge_partial_optimal(
    w: FusionFrame,
    basis: Sequence,
    u: DualPerturbation,
    tol: Tolerance = DEFAULT_TOL,
) -> list[tuple[float, float]]:
    """Block erasure errors of a perturbed dual versus the canonical dual.

    For a Riesz fusion basis, every dual of the bridged frame has the same
    error on each member block; the returned per-member pairs (perturbed,
    canonical) therefore agree to numerical precision.
    """
    if not classify(w, tol).is_riesz_fusion_basis:
        raise ValueError("the family is not a Riesz fusion basis")
    f = bridge_fusion_to_discrete(w, basis, "canonical_weighted", tol)
    g = dual_from_perturbation(f, u, tol)
    canonical = discrete_canonical_dual(f, tol)
    out: list[tuple[float, float]] = []
    for i in range(1, w.member_count + 1):
        mask = block_mask(f, i)
        out.append(
            (
                partial_erasure_error(f, g, mask, "frobenius"),
                partial_erasure_error(f, canonical, mask, "frobenius"),
            )
        )
    return out


def _transport(pair: DualPair, u: np.ndarray, tol: Tolerance) -> DualPair:
    w = pair.primal
    v = pair.dual_candidate
    new_w = FusionFrame(
        w.ambient_dim,
        tuple(image_subspace(u, s, tol) for s in w.subspaces),
        w.weights,
    )
    new_v = FusionFrame(
        v.ambient_dim,
        tuple(image_subspace(u, s, tol) for s in v.subspaces),
        v.weights,
    )
    return make_dual_pair(new_w, new_v, tol)


def transport_by_unitary(pair: DualPair, u: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> DualPair:
    """Transport a dual pair by a unitary map; every erasure value is preserved."""
    u = np.asarray(u, dtype=float)
    n = pair.primal.ambient_dim
    if u.shape != (n, n):
        raise ValueError(f"operator must be {n} x {n}, got {u.shape}")
    if np.linalg.norm(u.T @ u - np.eye(n), "fro") > max(tol.residual_eps, 1e-9):
        raise ValueError("operator is not unitary within tolerance")
    return _transport(pair, u, tol)


def transport_by_invertible(
    pair: DualPair, u: np.ndarray, tol: Tolerance = DEFAULT_TOL
) -> DualPair:
    """Transport by an invertible map leaving u^T u invariant on every member.

    Duality is preserved (no optimality claim). The invariance precondition
    u^T u W_i inside W_i and u^T u V_i inside V_i is checked per index and
    all failures are reported together.
    """
    u = np.asarray(u, dtype=float)
    n = pair.primal.ambient_dim
    if u.shape != (n, n):
        raise ValueError(f"operator must be {n} x {n}, got {u.shape}")
    svals = np.linalg.svd(u, compute_uv=False)
    if svals[-1] <= tol.rank_eps:
        raise ValueError("operator is not invertible within tolerance")
    gram = u.T @ u
    failures = []
    for i, s in enumerate(pair.primal.subspaces, start=1):
        if not subspace_contains(s, image_subspace(gram, s, tol), tol):
            failures.append(f"primal member {i}")
    for i, s in enumerate(pair.dual_candidate.subspaces, start=1):
        if not subspace_contains(s, image_subspace(gram, s, tol), tol):
            failures.append(f"dual member {i}")
    if failures:
        raise ValueError(
            "u^T u does not leave these members invariant: " + ", ".join(failures)
        )
    return _transport(pair, u, tol)


def probe_duals(
    pair: DualPair,
    count: int,
    rng: np.random.Generator,
    tol: Tolerance = DEFAULT_TOL,
) -> list[FusionFrame]:
    """Randomized family of verified duals used to challenge optimality claims.

    Draws member-wise enlargements of the canonical dual by directions
    orthogonal to the canonical members, the applicable single-member
    variants from :func:`expand_optimal_family`, and component-preserving
    lifts. Refutation by a probe is sound; exhausting probes without finding
    a better dual is inconclusive.
    """
    w = pair.primal
    base = canonical_pair(w, tol)
    s_inv = spd_inverse(frame_operator(w), tol)
    canonical_members = [image_subspace(s_inv, s, tol) for s in w.subspaces]
    probes: list[FusionFrame] = [base.dual_candidate]
    m = w.member_count
    while len(probes) < count:
        mode = rng.integers(0, 3)
        if mode == 0:
            members = []
            for can in canonical_members:
                comp = orthogonal_complement(can)
                if comp.dim > 0 and rng.random() < 0.6:
                    coeffs = rng.standard_normal(comp.dim)
                    direction = comp.basis @ coeffs
                    extra = Subspace(
                        w.ambient_dim,
                        (direction / np.linalg.norm(direction)).reshape(-1, 1),
                    )
                    members.append(subspace_sum([can, extra]))
                else:
                    members.append(can)
            probes.append(FusionFrame(w.ambient_dim, tuple(members), base.dual_candidate.weights))
        elif mode == 1 and probes:
            source = make_dual_pair(w, probes[int(rng.integers(0, len(probes)))], tol)
            variants = expand_optimal_family(source, int(rng.integers(1, m + 1)), tol, check_r_max=1)
            probes.extend(variants[: max(0, count - len(probes))])
        else:
            source = make_dual_pair(w, probes[int(rng.integers(0, len(probes)))], tol)
            probes.append(lift_to_component_preserving(source, tol))
    return probes[:count]
