"""Dense complex linear algebra underneath everything else.

Matrices are plain square ``numpy`` arrays of ``complex128``.  Conventions
fixed here and used by every other module:

* Hilbert-Schmidt inner product ``<A, B> = tr(A^dag B)`` on operator space.
* Column-stacking vectorization ``vec(M) = M.flatten(order="F")``, so that
  ``vec(A M B) = (B.T kron A) vec(M)`` and conjugation ``M -> U M U^dag``
  vectorizes to ``kron(conj(U), U)``.
* Kronecker products index the first factor slowest (numpy's ``kron``).
* Rank decisions use a relative singular-value threshold, default 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

DEFAULT_TOL = 1e-10


class NotHermitian(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate and return a square, finite, complex matrix."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {A.shape}")
    if A.shape[0] < 1:
        raise DimensionMismatch(f"{name} must have dim >= 1")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return A


def frobenius(M) -> float:
    return float(np.linalg.norm(M, "fro"))


def op_norm(M) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(M, 2))


def trace_norm(M) -> float:
    """Sum of singular values."""
    return float(np.sum(sla.svdvals(M)))


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product tr(A^dag B)."""
    return complex(np.sum(np.conj(A) * B))


def vec(M) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(M).flatten(order="F")


def unvec(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if d is None:
        d = round(np.sqrt(v.size))
    if d * d != v.size:
        raise DimensionMismatch(f"cannot reshape length-{v.size} vector to square matrix")
    return v.reshape((d, d), order="F")


def conjugation_superop(U) -> np.ndarray:
    """Superoperator of M -> U M U^dag under column-stacking."""
    U = np.asarray(U)
    return np.kron(U.conj(), U)


def eig_hermitian(M, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns of a unitary).
    Raises NotHermitian when ||M - M^dag||_F > tol * ||M||_F.
    """
    M = as_matrix(M)
    scale = frobenius(M)
    if frobenius(M - M.conj().T) > tol * max(scale, 1e-300):
        raise NotHermitian(
            f"matrix deviates from Hermitian by {frobenius(M - M.conj().T):.3e} "
            f"(allowed {tol * scale:.3e})"
        )
    vals, vecs = np.linalg.eigh(M)
    return vals, vecs


def kron(A, B) -> np.ndarray:
    """Kronecker product, first factor's index varies slowest."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of C^ambient_dim with an orthonormal basis.

    ``basis`` holds the basis vectors as columns; for operator subspaces the
    vectors are column-stacked matrices and orthonormality is with respect to
    the Hilbert-Schmidt inner product.
    """

    ambient_dim: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.ndim != 2:
            B = B.reshape(self.ambient_dim, -1)
        if B.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"basis vectors live in dim {B.shape[0]}, expected {self.ambient_dim}"
            )
        gram = B.conj().T @ B
        if B.shape[1] and np.max(np.abs(gram - np.eye(B.shape[1]))) > 1e-10:
            raise ValueError("subspace basis is not orthonormal to 1e-10")
        B = B.copy()
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of v onto the subspace."""
        B = self.basis
        return B @ (B.conj().T @ v)

    def projector(self) -> np.ndarray:
        B = self.basis
        return B @ B.conj().T

    def residual(self, v: np.ndarray) -> float:
        """Distance of v/||v|| from the subspace (0 for v = 0)."""
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        return float(np.linalg.norm(v - self.project(v)) / nv)

    def contains(self, v: np.ndarray, tol: float | None = None) -> bool:
        return self.residual(v) <= (self.tol if tol is None else tol)

    def matrices(self) -> list[np.ndarray]:
        """Basis vectors unvectorized to matrices (ambient_dim must be a square)."""
        return [unvec(self.basis[:, k]) for k in range(self.dim)]


def _null_basis(M: np.ndarray, cutoff: float) -> np.ndarray:
    """Orthonormal basis of {v : ||Mv|| <= cutoff}, via SVD."""
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def null_space(M, tol: float = DEFAULT_TOL) -> Subspace:
    """Numerical null space of M via SVD.

    Singular values <= tol * (largest singular value) count as zero; the
    returned basis spans the corresponding right-singular vectors.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch("null_space expects a 2-d array")
    n = M.shape[1]
    if M.shape[0] == 0 or not M.any():
        return Subspace(n, np.eye(n, dtype=complex), tol)
    s_max = float(np.linalg.norm(M, 2))
    return Subspace(n, _null_basis(M, tol * s_max), tol)


def _commutator_superop(A: np.ndarray, d: int) -> np.ndarray:
    # vec(AM - MA) = (I kron A - A.T kron I) vec(M)
    eye = np.eye(d)
    return np.kron(eye, A) - np.kron(A.T, eye)


def joint_null_space(operators, n: int, tol: float = DEFAULT_TOL, scales=None) -> Subspace:
    """Intersection of the null spaces of the given n x n operators.

    Computed by sequential restriction: the running basis is narrowed by the
    null space of each operator in turn, which keeps every SVD small.  The
    rank cutoff for operator i is tol * scales[i]; scales default to each
    operator's own largest singular value, but callers whose operators may be
    numerically zero (e.g. commutators with near-scalar matrices) must pass
    the natural problem scale instead.
    """
    N = np.eye(n, dtype=complex)
    for i, L in enumerate(operators):
        if N.shape[1] == 0:
            break
        L = np.asarray(L, dtype=complex)
        scale = scales[i] if scales is not None else float(np.linalg.norm(L, 2))
        N = N @ _null_basis(L @ N, tol * scale)
    return Subspace(n, N, tol)


def commutant(S, d: int, tol: float = DEFAULT_TOL) -> Subspace:
    """Basis of {M : MA = AM for all A in S} as a subspace of vectorized M_d.

    The zero-decision scale for each generator A is ||A||_F, so matrices that
    commute with everything (scalars) yield the full space rather than a
    noise-rank artifact.
    """
    mats = [as_matrix(A) for A in S]
    for A in mats:
        if A.shape[0] != d:
            raise DimensionMismatch(f"expected {d}x{d} matrices, got {A.shape}")
    ops = [_commutator_superop(A, d) for A in mats]
    scales = [max(frobenius(A), 1e-300) for A in mats]
    return joint_null_space(ops, d * d, tol, scales=scales)


def double_commutant(S, d: int, tol: float = DEFAULT_TOL) -> Subspace:
    """Commutant applied twice; in finite dimension this is the generated
    unital *-algebra of S."""
    first = commutant(S, d, tol)
    return commutant(first.matrices(), d, tol)


def principal_angle_residual(a: Subspace, b: Subspace) -> tuple[float, float]:
    """(largest principal angle, smallest cross-Gram singular value).

    The angle is computed as asin of the spectral norm of the projector
    difference, which stays accurate for angles far below what
    arccos(singular value) can resolve.  Dimensions must match for the angle
    to mean subspace equality; callers gate on dim equality separately.
    """
    if a.dim == 0 and b.dim == 0:
        return 0.0, 1.0
    if a.dim == 0 or b.dim == 0:
        return float(np.pi / 2), 0.0
    gap = op_norm(a.projector() - b.projector())
    angle = float(np.arcsin(min(1.0, gap)))
    sigma = sla.svdvals(a.basis.conj().T @ b.basis)
    return angle, float(sigma.min())


def pairwise_mean(stack: np.ndarray) -> np.ndarray:
    """Mean over axis 0 using a fixed-order pairwise summation tree.

    The reduction order is independent of how the terms were produced, so
    concurrent sample generation cannot change the result bitwise.
    """
    arr = np.asarray(stack)
    n = arr.shape[0]
    if n == 0:
        raise ValueError("cannot average an empty stack")
    acc = arr.copy()
    while acc.shape[0] > 1:
        m = acc.shape[0]
        half = m // 2
        head = acc[: 2 * half : 2] + acc[1 : 2 * half : 2]
        acc = np.concatenate([head, acc[2 * half :]], axis=0) if m % 2 else head
    return acc[0] / n


def matrix_to_json(M) -> list:
    """Nested-list encoding with [re, im] pairs for each entry."""
    A = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(data, name: str = "matrix") -> np.ndarray:
    try:
        A = np.asarray(
            [[complex(entry[0], entry[1]) for entry in row] for row in data]
        )
    except (TypeError, IndexError) as exc:
        raise ValueError(f"malformed {name} encoding: {exc}") from exc
    return as_matrix(A, name)
