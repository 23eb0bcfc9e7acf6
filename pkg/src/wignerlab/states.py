"""Density-matrix states and their behaviour under gauge automorphisms.

A state is the functional f(A) = tr(rho A); the dual action of a group
element ("pullback") is rho -> U(g)^dag rho U(g), so that
pair(pullback(g, rho), A) = pair(rho, act(g, A)) holds as an exact
adjunction.  Weak-topology statements from the infinite-dimensional picture
are realized as trace-norm statements, which is equivalent at fixed finite
dimension.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import groups as G
from .matrixcore import (
    DimensionMismatch,
    as_matrix,
    eig_hermitian,
    frobenius,
    matrix_from_json,
    matrix_to_json,
    pairwise_mean,
    trace_norm,
)

log = logging.getLogger(__name__)


class MethodUnsupported(ValueError):
    """Averaging method incompatible with the group kind."""


@dataclass(frozen=True, eq=False)
class DensityState:
    """Hermitian, positive semidefinite, trace-one matrix."""

    d: int
    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix(self.rho, "density matrix")
        if rho.shape[0] != self.d:
            raise DimensionMismatch(f"declared d={self.d} but matrix is {rho.shape[0]}x{rho.shape[0]}")
        if frobenius(rho - rho.conj().T) > 1e-10:
            raise ValueError("density matrix is not Hermitian to 1e-10")
        if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
            raise ValueError(f"density matrix trace {np.trace(rho)} differs from 1")
        lo = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2.0).min())
        if lo < -1e-10:
            raise ValueError(f"density matrix has eigenvalue {lo} below -1e-10")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def eigenvalues(self) -> np.ndarray:
        vals, _ = eig_hermitian((self.rho + self.rho.conj().T) / 2.0)
        return vals

    def to_json(self) -> dict:
        return {"d": self.d, "rho": matrix_to_json(self.rho)}

    @classmethod
    def from_json(cls, doc: dict) -> "DensityState":
        try:
            d = int(doc["d"])
            rho = matrix_from_json(doc["rho"], "rho")
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed state document: {exc}") from exc
        return cls(d, rho)


def maximally_mixed(d: int) -> DensityState:
    return DensityState(d, np.eye(d, dtype=complex) / d)


def pure_state(vector) -> DensityState:
    v = np.asarray(vector, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector cannot define a pure state")
    v = v / n
    return DensityState(v.size, np.outer(v, v.conj()))


def random_density(d: int, rng: np.random.Generator) -> DensityState:
    """Full-rank random density matrix rho = G G^dag / tr(G G^dag)."""
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    rho = g @ g.conj().T
    return DensityState(d, rho / np.trace(rho).real)


def repair_psd(rho: np.ndarray, max_repair: float = 1e-10) -> tuple[np.ndarray, float]:
    """Clip eigenvalues below -1e-12 to zero and renormalize the trace.

    Returns (repaired matrix, trace-norm repair magnitude); magnitudes above
    ``max_repair`` indicate a real contract violation and raise.
    """
    herm = (rho + rho.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(herm)
    if vals.min() >= -1e-12:
        out = herm / np.trace(herm).real
        return out, float(trace_norm(out - rho))
    clipped = np.maximum(vals, 0.0)
    out = (vecs * clipped) @ vecs.conj().T
    out = out / np.trace(out).real
    magnitude = float(trace_norm(out - rho))
    if magnitude > max_repair:
        raise ValueError(f"PSD repair of magnitude {magnitude:.3e} exceeds {max_repair:.1e}")
    log.debug("PSD repair applied, magnitude %.3e", magnitude)
    return out, magnitude


def pair(rho: DensityState, A) -> complex:
    """Predual pairing f(A) = tr(rho A)."""
    A = as_matrix(A)
    if A.shape[0] != rho.d:
        raise DimensionMismatch(f"operator dim {A.shape[0]} != state dim {rho.d}")
    return complex(np.trace(rho.rho @ A))


def pullback(rep: G.UnitaryRep, g: G.GroupElement, rho: DensityState) -> DensityState:
    """Dual action rho -> U(g)^dag rho U(g)."""
    if rho.d != rep.dim:
        raise DimensionMismatch(f"state dim {rho.d} != representation dim {rep.dim}")
    U = G.element_unitary(rep, g)
    return DensityState(rho.d, U.conj().T @ rho.rho @ U)


def trace_distance(a: DensityState, b: DensityState) -> float:
    return trace_norm(a.rho - b.rho)


def invariance_residual(
    rep: G.UnitaryRep, state: DensityState, probes: int = 20, seed: int = 0
) -> float:
    """Max trace-norm defect of the state under a deterministic probe set of
    group elements (all elements for finite groups, fixed-seed Haar otherwise)."""
    if isinstance(rep.group, G.FiniteGroup):
        elements = G.finite_elements(rep.group)
    else:
        elements = G.haar_sample(rep, seed, probes)
    return max(trace_distance(pullback(rep, g, state), state) for g in elements)


@dataclass(frozen=True)
class HaarAverageResult:
    state: DensityState
    residual: float
    method: str
    repair_magnitude: float


def _u1_grid_size(rep: G.UnitaryRep) -> int:
    weights = rep.meta.get("weights")
    if weights:
        spread = int(max(weights) - min(weights))
        return max(2 * spread + 1, 8)
    return 257


def haar_average(
    rep: G.UnitaryRep,
    rho: DensityState,
    method: str = "auto",
    seed: int = 0,
    count: int = 4096,
    order: int = 24,
) -> HaarAverageResult:
    """Group-average a state: rho_bar = integral of U(g)^dag rho U(g) dg.

    Methods: "finite_exact" (uniform sum over a finite group), "quadrature"
    (U(1) uniform grid, SU(2) Euler Gauss-Legendre), "montecarlo" (Haar
    samples, fixed-order pairwise summation), or "auto" to pick the sharpest
    method the group kind admits.
    """
    if rho.d != rep.dim:
        raise DimensionMismatch(f"state dim {rho.d} != representation dim {rep.dim}")
    kind = rep.group.kind
    if method == "auto":
        method = {"finite": "finite_exact", "u1": "quadrature", "su2": "quadrature", "su3": "montecarlo"}[kind]

    if method == "finite_exact":
        if kind != "finite":
            raise MethodUnsupported("finite_exact needs a finite group")
        mats = [G.element_unitary(rep, g) for g in G.finite_elements(rep.group)]
        stack = np.stack([U.conj().T @ rho.rho @ U for U in mats])
        avg = pairwise_mean(stack)
    elif method == "quadrature":
        if kind == "u1":
            n = _u1_grid_size(rep)
            thetas = [2.0 * math.pi * k / n for k in range(n)]
            stack = np.stack(
                [pullback(rep, G.U1Element(t), rho).rho for t in thetas]
            )
            avg = pairwise_mean(stack)
        elif kind == "su2":
            def f(el):
                U = G.element_unitary(rep, el)
                return U.conj().T @ rho.rho @ U

            avg = G.haar_quadrature_su2(f, order=order)
        else:
            raise MethodUnsupported(f"no quadrature for group kind {kind!r}")
    elif method == "montecarlo":
        if kind == "finite":
            raise MethodUnsupported("use finite_exact for finite groups")
        samples = G.haar_sample(rep, seed, count)
        stack = np.stack([pullback(rep, g, rho).rho for g in samples])
        avg = pairwise_mean(stack)
    else:
        raise MethodUnsupported(f"unknown method {method!r}")

    repaired, magnitude = repair_psd(avg)
    state = DensityState(rho.d, repaired)
    residual = invariance_residual(rep, state)
    return HaarAverageResult(state, residual, method, magnitude)


@dataclass(frozen=True)
class OrbitHull:
    """Finite sample of the orbit {f . alpha_g} of a seed state, closed under
    convex combination."""

    rep: G.UnitaryRep
    seed_state: DensityState
    elements: tuple
    samples: tuple

    def barycenter(self) -> DensityState:
        stack = np.stack([s.rho for s in self.samples])
        repaired, _ = repair_psd(pairwise_mean(stack))
        return DensityState(self.seed_state.d, repaired)

    def combine(self, weights: Sequence[float]) -> DensityState:
        w = np.asarray(list(weights), dtype=float)
        if w.size != len(self.samples):
            raise ValueError(f"need {len(self.samples)} weights, got {w.size}")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        mix = sum(wi * s.rho for wi, s in zip(w, self.samples))
        repaired, _ = repair_psd(mix)
        return DensityState(self.seed_state.d, repaired)


def orbit_hull(rep: G.UnitaryRep, rho: DensityState, n_samples: int, seed: int) -> OrbitHull:
    """Sample the orbit of rho: Haar draws for Lie groups, the full group for
    finite groups."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if isinstance(rep.group, G.FiniteGroup):
        elements = tuple(G.finite_elements(rep.group))
    else:
        elements = tuple(G.haar_sample(rep, seed, n_samples))
    samples = tuple(pullback(rep, g, rho) for g in elements)
    return OrbitHull(rep, rho, elements, samples)


@dataclass(frozen=True)
class SeparatingResult:
    separating: bool
    min_eigenvalue: float
    witness: np.ndarray | None
    witness_pairing: float | None


def is_separating(rho: DensityState, tol: float = 1e-10) -> SeparatingResult:
    """Full-rank test: f(A^dag A) = 0 forces A = 0 iff rho has no kernel.

    ``tol`` is relative to the largest eigenvalue.  When the state fails, the
    witness is the projection onto the (numerical) null eigenspace: a nonzero
    A with tr(rho A^dag A) <= tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vals, vecs = eig_hermitian((rho.rho + rho.rho.conj().T) / 2.0)
    threshold = tol * max(vals[-1], 1e-300)
    if vals[0] > threshold:
        return SeparatingResult(True, float(vals[0]), None, None)
    null_cols = vecs[:, vals <= threshold]
    witness = null_cols @ null_cols.conj().T
    pairing = float(np.trace(rho.rho @ witness.conj().T @ witness).real)
    return SeparatingResult(False, float(vals[0]), witness, pairing)
