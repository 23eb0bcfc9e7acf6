"""Wigner fixed-point sets and the intersection identity.

For a represented group element g, the fixed points of the dual action
rho -> U(g)^dag rho U(g) form a linear subspace of M_d: the commutant of
U(g).  Given a finite family {g_1 .. g_n}, the intersection of the
per-element fixed subspaces coincides with the fixed subspace of the
averaged map (1/n) sum_j U(g_j)^dag . U(g_j).  This module computes both
sides independently, reports their dimensions and principal angles, and
extracts invariant density matrices by restarted Cesaro iteration of the
averaged map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups as G
from .matrixcore import (
    Subspace,
    frobenius,
    null_space,
    principal_angle_residual,
    trace_norm,
    unvec,
    vec,
)
from .states import DensityState, random_density, repair_psd

DEFAULT_TOL = 1e-10

# lcm(1..8): a Cesaro window of this length annihilates every peripheral
# superoperator eigenvalue that is a root of unity of order <= 8 exactly
_BASE_WINDOW = 840


class NoConvergence(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class WignerProblem:
    """A representation together with a finite family of group elements."""

    rep: G.UnitaryRep
    elements: tuple

    def __post_init__(self):
        if len(self.elements) < 1:
            raise ValueError("need at least one group element")
        for g in self.elements:
            G.check_membership(self.rep.group, g)
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def d(self) -> int:
        return self.rep.dim


def _pullback_superop(rep: G.UnitaryRep, g: G.GroupElement) -> np.ndarray:
    # column-stacking: vec(U^dag M U) = (U.T kron U^dag) vec(M)
    U = G.element_unitary(rep, g)
    return np.kron(U.T, U.conj().T)


def averaged_superop(problem: WignerProblem) -> np.ndarray:
    ops = [_pullback_superop(problem.rep, g) for g in problem.elements]
    return sum(ops) / len(ops)


def wigner_subspace(rep: G.UnitaryRep, g: G.GroupElement, tol: float = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of {M : U(g)^dag M U(g) = M} (the commutant of U(g))."""
    S = _pullback_superop(rep, g)
    return null_space(S - np.eye(S.shape[0]), tol)


def averaged_fixed_subspace(problem: WignerProblem, tol: float = DEFAULT_TOL) -> Subspace:
    """Fixed subspace of the averaged map (1/n) sum_j U(g_j)^dag . U(g_j)."""
    S = averaged_superop(problem)
    return null_space(S - np.eye(S.shape[0]), tol)


def intersect_stacked(subspaces: list[Subspace], tol: float = DEFAULT_TOL) -> Subspace:
    """Subspace intersection via one null space of stacked (P_j - I) blocks."""
    if not subspaces:
        raise ValueError("need at least one subspace")
    n = subspaces[0].ambient_dim
    eye = np.eye(n)
    stacked = np.vstack([s.projector() - eye for s in subspaces])
    return null_space(stacked, tol) if stacked.any() else Subspace(n, np.eye(n, dtype=complex), tol)


def intersect_alternating(
    subspaces: list[Subspace], threshold: float = 1e-12, max_rounds: int = 100
) -> Subspace:
    """Subspace intersection by powering the cyclic product of projectors.

    The product of the orthogonal projectors converges (von Neumann /
    Halperin) to the projector onto the intersection; repeated squaring makes
    the convergence fast.  Stops when the iterate is idempotent to
    ``threshold``.
    """
    if not subspaces:
        raise ValueError("need at least one subspace")
    n = subspaces[0].ambient_dim
    Q = np.eye(n, dtype=complex)
    for s in subspaces:
        Q = s.projector() @ Q
    for _ in range(max_rounds):
        if frobenius(Q @ Q - Q) <= threshold:
            break
        Q = Q @ Q
    else:
        raise RuntimeError("alternating projections did not reach an idempotent limit")
    u, sv, _ = np.linalg.svd(Q)
    keep = sv > 0.5
    return Subspace(n, u[:, keep], threshold)


@dataclass(frozen=True)
class WignerReport:
    """Both sides of the fixed-set identity for one element family."""

    rep_name: str
    d: int
    element_params: tuple
    element_dims: tuple
    intersection_dim: int
    averaged_dim: int
    max_principal_angle: float
    min_gram_singular_value: float
    inclusion_residual: float
    verdict: bool

    def to_json(self) -> dict:
        return {
            "rep": self.rep_name,
            "d": self.d,
            "elements": list(self.element_params),
            "element_dims": list(self.element_dims),
            "intersection_dim": self.intersection_dim,
            "averaged_dim": self.averaged_dim,
            "max_principal_angle": self.max_principal_angle,
            "min_gram_singular_value": self.min_gram_singular_value,
            "inclusion_residual": self.inclusion_residual,
            "verdict": self.verdict,
        }


def verify_wigner_identity(problem: WignerProblem, tol: float = DEFAULT_TOL) -> WignerReport:
    """Check dim and principal-angle agreement of the intersection of the
    per-element fixed subspaces with the averaged map's fixed subspace.

    The intersection is computed twice (alternating projections and null-space
    stacking) as a guard against threshold artifacts; the averaged side comes
    from its own null-space computation.
    """
    subs = [wigner_subspace(problem.rep, g, tol) for g in problem.elements]
    inter = intersect_stacked(subs, tol)
    inter_alt = intersect_alternating(subs)
    if inter.dim != inter_alt.dim:
        raise RuntimeError(
            f"intersection algorithms disagree: stacked {inter.dim}, alternating {inter_alt.dim}"
        )
    avg = averaged_fixed_subspace(problem, tol)

    S = averaged_superop(problem)
    inclusion = 0.0
    for k in range(inter.dim):
        v = inter.basis[:, k]
        inclusion = max(inclusion, float(np.linalg.norm(S @ v - v)))

    angle, sigma_min = principal_angle_residual(inter, avg)
    verdict = (
        inter.dim == avg.dim and angle <= 1e-8 and (inter.dim == 0 or sigma_min >= 1.0 - 1e-8)
    )
    return WignerReport(
        rep_name=problem.rep.name,
        d=problem.d,
        element_params=tuple(G.describe_element(g) for g in problem.elements),
        element_dims=tuple(s.dim for s in subs),
        intersection_dim=inter.dim,
        averaged_dim=avg.dim,
        max_principal_angle=angle,
        min_gram_singular_value=sigma_min,
        inclusion_residual=inclusion,
        verdict=bool(verdict),
    )


def cesaro_fixed_point(
    problem: WignerProblem,
    rho0: DensityState,
    tol: float = DEFAULT_TOL,
    max_iter: int = 10**5,
) -> DensityState:
    """Invariant density matrix in the orbit hull of rho0.

    Iterates the averaged map T(rho) = (1/n) sum_j U(g_j)^dag rho U(g_j) and
    averages the iterates over a window (Cesaro mean), restarting from the
    window mean with doubled window length until ||T(rho*) - rho*||_tr <= tol.
    Every window mean is a convex combination of pullbacks of rho0, so the
    output stays in the orbit hull; plain iteration alone can oscillate on
    the peripheral spectrum, the window means cannot.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rho0.d != problem.d:
        raise ValueError(f"state dim {rho0.d} != representation dim {problem.d}")
    S = averaged_superop(problem)
    side = problem.d

    def t_residual(v: np.ndarray) -> float:
        return trace_norm(unvec(S @ v - v, side))

    sigma = vec(rho0.rho)
    residual = t_residual(sigma)
    iterations = 0
    window = _BASE_WINDOW
    while residual > tol:
        if iterations >= max_iter:
            raise NoConvergence(
                f"Cesaro iteration residual {residual:.3e} > tol {tol:.1e} "
                f"after {iterations} iterations",
                residual,
            )
        w = min(window, max_iter - iterations)
        acc = np.zeros_like(sigma)
        cur = sigma
        for _ in range(w):
            acc = acc + cur
            cur = S @ cur
        sigma = acc / w
        iterations += w
        window *= 2
        residual = t_residual(sigma)
    repaired, _ = repair_psd(unvec(sigma, side))
    return DensityState(side, repaired)


# ---------------------------------------------------------------------------
# reproducible problem batches (shared by the CLI and the acceptance suite)


def _rep_for(kind: str, d: int, order_hint: int) -> G.UnitaryRep:
    if kind == "su2":
        return G.su2_irrep(d)
    if kind == "su3":
        return G.su3_rep(max(d, 3))
    if kind == "zn":
        return G.cyclic_rep(order_hint, dim=d)
    if kind == "q8":
        return G.quaternion_rep(d)
    raise ValueError(f"unknown problem kind {kind!r}")


def standard_problem_batch(
    count: int = 200,
    base_seed: int = 2026,
    kinds: tuple[str, ...] = ("su2", "su3", "zn", "q8"),
    dims: tuple[int, ...] = (2, 3, 4, 5, 6),
    max_elements: int = 4,
) -> list[WignerProblem]:
    """Deterministic schedule of randomized problems cycling over dimensions,
    family sizes, and group kinds; elements are drawn from the seed schedule
    base_seed + index."""
    cache: dict = {}
    problems = []
    for i in range(count):
        d = dims[i % len(dims)]
        n = 1 + i % max_elements
        kind = kinds[i % len(kinds)]
        order_hint = 2 + (i // 3) % 5
        key = (kind, d, order_hint)
        if key not in cache:
            cache[key] = _rep_for(kind, d, order_hint)
        rep = cache[key]
        elements = tuple(G.haar_sample(rep, base_seed + i, n))
        problems.append(WignerProblem(rep, elements))
    return problems


def problem_seed_state(problem: WignerProblem, seed: int) -> DensityState:
    """Deterministic full-rank seed state for Cesaro runs."""
    return random_density(problem.d, G.philox_stream(seed, 999))
