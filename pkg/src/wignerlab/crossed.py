"""Crossed products A x G for finite groups, realized on H tensor l2(G).

The carrier is C^d tensor C^|G| with the fibre factor first; basis vectors of
the group factor follow the Cayley-table order.  The translation unitaries
U_h send x tensor e_g to x tensor e_{g h^-1}; the embedding Phi places
alpha_g(A) in the g-th diagonal block.  U_h Phi(A) U_h^dag = Phi(alpha_h(A))
then holds exactly, and the generated algebra is computed two independent
ways: product closure of the spanning set and the double commutant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups as G
from .matrixcore import (
    DimensionMismatch,
    as_matrix,
    double_commutant,
    kron,
    unvec,
    vec,
)


class NonConvergent(RuntimeError):
    """Product closure failed to stabilize (signals a bug, not an input)."""


class ResourceCapExceeded(ValueError):
    """Requested model exceeds the configured ambient-dimension cap."""


@dataclass(frozen=True)
class CrossedProductModel:
    """A finite group acting on M_d through a unitary representation."""

    rep: G.UnitaryRep

    def __post_init__(self):
        if not isinstance(self.rep.group, G.FiniteGroup):
            raise ValueError("crossed products are built for finite groups only")

    @property
    def group(self) -> G.FiniteGroup:
        return self.rep.group

    @property
    def d(self) -> int:
        return self.rep.dim

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def ambient_dim(self) -> int:
        return self.d * self.order

    def to_json(self) -> dict:
        return G.finite_group_to_json(self.group, self.rep)


def regular_unitary(model: CrossedProductModel, h: G.GroupElement) -> np.ndarray:
    """Translation unitary on the group factor: x tensor e_g -> x tensor e_{g h^-1}."""
    G.check_membership(model.group, h)
    group = model.group
    hinv = G.inverse_element(group, h)
    perm = np.zeros((group.order, group.order))
    for g in range(group.order):
        perm[group.table[g, hinv.index], g] = 1.0
    return kron(np.eye(model.d), perm)


def embed(model: CrossedProductModel, A) -> np.ndarray:
    """Phi(A): block-diagonal over the group index with blocks alpha_g(A)."""
    A = as_matrix(A)
    if A.shape[0] != model.d:
        raise DimensionMismatch(f"operator dim {A.shape[0]} != fibre dim {model.d}")
    order = model.order
    out = np.zeros((model.ambient_dim, model.ambient_dim), dtype=complex)
    for g in G.finite_elements(model.group):
        block = G.act(model.rep, g, A)
        E = np.zeros((order, order))
        E[g.index, g.index] = 1.0
        out += kron(block, E)
    return out


def _matrix_units(d: int) -> list[np.ndarray]:
    units = []
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            units.append(E)
    return units


def covariance_check(model: CrossedProductModel) -> float:
    """Max over h and a fibre basis of ||U_h Phi(A) U_h^dag - Phi(alpha_h(A))||_F."""
    worst = 0.0
    for h in G.finite_elements(model.group):
        U = regular_unitary(model, h)
        for A in _matrix_units(model.d):
            lhs = U @ embed(model, A) @ U.conj().T
            rhs = embed(model, G.act(model.rep, h, A))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


@dataclass(frozen=True)
class AlgebraSpan:
    """Orthonormal (Hilbert-Schmidt) basis of a *-closed unital subspace of
    matrices, stored as vectorized columns."""

    matrix_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def matrices(self) -> list[np.ndarray]:
        return [unvec(self.basis[:, k], self.matrix_dim) for k in range(self.dim)]

    def residual(self, M) -> float:
        v = vec(as_matrix(M))
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        return float(np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v)) / nv)


def _orthonormal_columns(X: np.ndarray, tol: float) -> np.ndarray:
    if X.size == 0:
        return np.zeros((X.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(X, full_matrices=False)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    return u[:, s > cutoff]


def algebra_closure(generators, matrix_dim: int, tol: float = 1e-10) -> AlgebraSpan:
    """Close the span of the generators under products and adjoints.

    New directions are Gram-Schmidt'ed against the running orthonormal basis
    (threshold ``tol``); each round multiplies the latest additions against
    the whole basis, so the work stays proportional to actual growth.
    """
    gens = [as_matrix(M) for M in generators]
    n = matrix_dim * matrix_dim
    seed = np.column_stack([vec(M) for M in gens] + [vec(np.eye(matrix_dim, dtype=complex))])
    basis = _orthonormal_columns(seed, tol)
    fresh = basis
    rounds = 0
    while fresh.shape[1] > 0:
        rounds += 1
        if rounds > n * n:
            raise NonConvergent("product closure exceeded the iteration guard")
        old_mats = [unvec(basis[:, k], matrix_dim) for k in range(basis.shape[1])]
        new_mats = [unvec(fresh[:, k], matrix_dim) for k in range(fresh.shape[1])]
        prods = []
        for A in new_mats:
            prods.append(vec(A.conj().T))
            for B in old_mats:
                prods.append(vec(A @ B))
                prods.append(vec(B @ A))
        X = np.column_stack(prods)
        R = X - basis @ (basis.conj().T @ X)
        fresh = _orthonormal_columns(R, tol)
        if fresh.shape[1]:
            basis = np.column_stack([basis, fresh])
    return AlgebraSpan(matrix_dim, basis)


def spanning_generators(model: CrossedProductModel) -> list[np.ndarray]:
    """The products U_h Phi(A_i) over all h in G and a matrix-unit basis A_i."""
    units = _matrix_units(model.d)
    gens = []
    for h in G.finite_elements(model.group):
        U = regular_unitary(model, h)
        for A in units:
            gens.append(U @ embed(model, A))
    return gens


def crossed_dimension(model: CrossedProductModel, tol: float = 1e-10) -> int:
    """Dimension of the generated algebra, with the product closure checked
    against the double commutant."""
    gens = spanning_generators(model)
    span = algebra_closure(gens, model.ambient_dim, tol)
    dc = double_commutant(gens, model.ambient_dim, tol)
    if span.dim != dc.dim:
        raise RuntimeError(
            f"product closure dim {span.dim} != double commutant dim {dc.dim}"
        )
    return span.dim


def tensor_product_model(a: CrossedProductModel, b: CrossedProductModel) -> CrossedProductModel:
    """The model for (A1 tensor A2) x (G1 x G2) with the product action."""
    return CrossedProductModel(G.product_rep(a.rep, b.rep))


@dataclass(frozen=True)
class TensorIsoReport:
    factor_dims: tuple
    product_of_dims: int
    product_model_dim: int
    ambient_dim: int
    equal: bool

    def to_json(self) -> dict:
        return {
            "factor_dims": list(self.factor_dims),
            "product_of_dims": self.product_of_dims,
            "product_model_dim": self.product_model_dim,
            "ambient_dim": self.ambient_dim,
            "equal": self.equal,
        }


def tensor_iso_check(models, ambient_cap: int = 64) -> TensorIsoReport:
    """Compare dim((A1 x G1) tensor ... tensor (An x Gn)), computed as the
    product of the factor dimensions, with the dimension of the product-group
    model built on the tensor-product fibre."""
    models = list(models)
    if len(models) < 2:
        raise ValueError("need at least two factors")
    combined = models[0]
    for m in models[1:]:
        combined = tensor_product_model(combined, m)
        if combined.ambient_dim > ambient_cap:
            raise ResourceCapExceeded(
                f"product model ambient dimension {combined.ambient_dim} exceeds cap {ambient_cap}"
            )
    factor_dims = tuple(crossed_dimension(m) for m in models)
    product_of_dims = 1
    for v in factor_dims:
        product_of_dims *= v
    product_model_dim = crossed_dimension(combined)
    return TensorIsoReport(
        factor_dims=factor_dims,
        product_of_dims=product_of_dims,
        product_model_dim=product_model_dim,
        ambient_dim=combined.ambient_dim,
        equal=bool(product_of_dims == product_model_dim),
    )
