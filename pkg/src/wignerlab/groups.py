"""Groups, concrete unitary representations, and gauge automorphisms.

Four group kinds are supported: finite groups given by a Cayley table, and
the compact Lie groups U(1), SU(2), SU(3).  SU(2) elements are parameterized
by Euler angles with the convention

    U(phi, theta, psi) = diag(e^{i phi/2}, e^{-i phi/2})
                         . R_y(theta)
                         . diag(e^{i psi/2}, e^{-i psi/2})

with theta in [0, pi] and phi, psi in [-2pi, 2pi] (the double cover needs a
4pi worth of combined phase range).  Haar sampling is Ginibre + QR with
diagonal-phase correction, then division by the principal n-th root of the
determinant for the special groups.  All randomness flows through Philox
counter streams keyed by (seed, stream index), so sampling is reproducible
and order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .matrixcore import DimensionMismatch, as_matrix, frobenius, kron, matrix_from_json, matrix_to_json

TWO_PI = 2.0 * math.pi


class BadElement(ValueError):
    """Group element is malformed or does not belong to the group."""


# ---------------------------------------------------------------------------
# group descriptors


@dataclass(frozen=True)
class LieGroup:
    kind: str


U1 = LieGroup("u1")
SU2 = LieGroup("su2")
SU3 = LieGroup("su3")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group as labels plus a Cayley table (table[i, j] = index of g_i g_j)."""

    labels: tuple[str, ...]
    table: np.ndarray
    identity: int

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.labels == other.labels
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.labels, self.identity))

    def __post_init__(self):
        n = len(self.labels)
        table = np.asarray(self.table, dtype=int)
        if table.shape != (n, n):
            raise ValueError(f"Cayley table must be {n}x{n}, got {table.shape}")
        full = set(range(n))
        for i in range(n):
            if set(table[i, :]) != full or set(table[:, i]) != full:
                raise ValueError("Cayley table is not a Latin square")
        e = self.identity
        if not (0 <= e < n):
            raise ValueError("identity index out of range")
        if not (np.all(table[e, :] == np.arange(n)) and np.all(table[:, e] == np.arange(n))):
            raise ValueError("declared identity is not a two-sided identity")
        inverses = np.full(n, -1, dtype=int)
        for i in range(n):
            js = np.flatnonzero(table[i, :] == e)
            if js.size != 1 or table[js[0], i] != e:
                raise ValueError(f"element {i} has no two-sided inverse")
            inverses[i] = js[0]
        # a Latin square with identity is only a loop; the translation
        # unitaries U_h U_k = U_{hk} need actual associativity
        if not np.array_equal(table[table, :], table[:, table]):
            raise ValueError("Cayley table is not associative")
        table = table.copy()
        table.setflags(write=False)
        inverses.setflags(write=False)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_inverses", inverses)

    @property
    def kind(self) -> str:
        return "finite"

    @property
    def order(self) -> int:
        return len(self.labels)


GroupDescriptor = FiniteGroup | LieGroup


# ---------------------------------------------------------------------------
# group elements


@dataclass(frozen=True)
class FiniteElement:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise BadElement(f"negative element index {self.index}")


@dataclass(frozen=True)
class U1Element:
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta < TWO_PI) or not math.isfinite(self.theta):
            raise BadElement(f"U(1) angle must lie in [0, 2pi), got {self.theta}")


@dataclass(frozen=True)
class SU2Element:
    phi: float
    theta: float
    psi: float

    def __post_init__(self):
        ok = (
            -1e-12 <= self.theta <= math.pi + 1e-12
            and abs(self.phi) <= TWO_PI + 1e-12
            and abs(self.psi) <= TWO_PI + 1e-12
        )
        if not ok or not all(map(math.isfinite, (self.phi, self.theta, self.psi))):
            raise BadElement(
                f"Euler angles out of range: phi={self.phi} theta={self.theta} psi={self.psi}"
            )


@dataclass(frozen=True, eq=False)
class SU3Element:
    matrix: np.ndarray

    def __eq__(self, other):
        return isinstance(other, SU3Element) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __post_init__(self):
        M = as_matrix(self.matrix, "SU(3) element")
        if M.shape != (3, 3):
            raise BadElement(f"SU(3) element must be 3x3, got {M.shape}")
        if frobenius(M.conj().T @ M - np.eye(3)) > 1e-10:
            raise BadElement("SU(3) element is not unitary to 1e-10")
        if abs(np.linalg.det(M) - 1.0) > 1e-10:
            raise BadElement("SU(3) element determinant differs from 1 by more than 1e-10")
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)


GroupElement = FiniteElement | U1Element | SU2Element | SU3Element

_ELEMENT_KIND = {FiniteElement: "finite", U1Element: "u1", SU2Element: "su2", SU3Element: "su3"}


def check_membership(group: GroupDescriptor, g: GroupElement) -> None:
    kind = _ELEMENT_KIND.get(type(g))
    if kind is None or kind != group.kind:
        raise BadElement(f"element {g!r} does not belong to a {group.kind} group")
    if isinstance(g, FiniteElement) and g.index >= group.order:
        raise BadElement(f"index {g.index} out of range for group of order {group.order}")


def identity_element(group: GroupDescriptor) -> GroupElement:
    if isinstance(group, FiniteGroup):
        return FiniteElement(group.identity)
    if group.kind == "u1":
        return U1Element(0.0)
    if group.kind == "su2":
        return SU2Element(0.0, 0.0, 0.0)
    return SU3Element(np.eye(3))


def su2_matrix(phi: float, theta: float, psi: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    zl = np.array([np.exp(0.5j * phi), np.exp(-0.5j * phi)])
    zr = np.array([np.exp(0.5j * psi), np.exp(-0.5j * psi)])
    ry = np.array([[c, -s], [s, c]], dtype=complex)
    return (zl[:, None] * ry) * zr[None, :]


def euler_from_su2(U) -> SU2Element:
    """Euler angles of a 2x2 special-unitary matrix (exact reconstruction)."""
    U = as_matrix(U, "SU(2) matrix")
    theta = 2.0 * math.atan2(abs(U[1, 0]), abs(U[0, 0]))
    s = 2.0 * np.angle(U[0, 0]) if abs(U[0, 0]) > 1e-14 else 0.0
    r = -2.0 * np.angle(U[1, 0]) if abs(U[1, 0]) > 1e-14 else 0.0
    return SU2Element((s + r) / 2.0, min(max(theta, 0.0), math.pi), (s - r) / 2.0)


def compose(group: GroupDescriptor, g: GroupElement, h: GroupElement) -> GroupElement:
    """The product gh in the given group."""
    check_membership(group, g)
    check_membership(group, h)
    if isinstance(group, FiniteGroup):
        return FiniteElement(int(group.table[g.index, h.index]))
    if group.kind == "u1":
        return U1Element((g.theta + h.theta) % TWO_PI)
    if group.kind == "su2":
        return euler_from_su2(
            su2_matrix(g.phi, g.theta, g.psi) @ su2_matrix(h.phi, h.theta, h.psi)
        )
    return SU3Element(g.matrix @ h.matrix)


def inverse_element(group: GroupDescriptor, g: GroupElement) -> GroupElement:
    check_membership(group, g)
    if isinstance(group, FiniteGroup):
        return FiniteElement(int(group._inverses[g.index]))
    if group.kind == "u1":
        return U1Element((-g.theta) % TWO_PI)
    if group.kind == "su2":
        return euler_from_su2(su2_matrix(g.phi, g.theta, g.psi).conj().T)
    return SU3Element(g.matrix.conj().T)


def finite_elements(group: FiniteGroup) -> list[FiniteElement]:
    return [FiniteElement(i) for i in range(group.order)]


def describe_element(g: GroupElement) -> dict:
    """JSON-able parameters of an element, for reproducible reports."""
    if isinstance(g, FiniteElement):
        return {"kind": "finite", "index": g.index}
    if isinstance(g, U1Element):
        return {"kind": "u1", "theta": g.theta}
    if isinstance(g, SU2Element):
        return {"kind": "su2", "phi": g.phi, "theta": g.theta, "psi": g.psi}
    return {"kind": "su3", "matrix": matrix_to_json(g.matrix)}


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class UnitaryRep:
    """A concrete unitary representation: a group plus a matrix for each element."""

    group: GroupDescriptor
    dim: int
    matrix_fn: Callable[[GroupElement], np.ndarray]
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def matrix(self, g: GroupElement) -> np.ndarray:
        return element_unitary(self, g)


def element_unitary(rep: UnitaryRep, g: GroupElement) -> np.ndarray:
    """The representing unitary U(g), validated to 1e-10."""
    check_membership(rep.group, g)
    U = np.asarray(rep.matrix_fn(g), dtype=complex)
    if U.shape != (rep.dim, rep.dim):
        raise DimensionMismatch(
            f"representation produced shape {U.shape}, expected ({rep.dim}, {rep.dim})"
        )
    if frobenius(U.conj().T @ U - np.eye(rep.dim)) > 1e-10:
        raise ValueError(f"representation {rep.name!r} produced a non-unitary matrix")
    if rep.group.kind in ("su2", "su3") and abs(np.linalg.det(U) - 1.0) > 1e-10:
        raise ValueError(f"representation {rep.name!r} lost the unit determinant")
    return U


def act(rep: UnitaryRep, g: GroupElement, A) -> np.ndarray:
    """Gauge automorphism A -> U(g) A U(g)^dag."""
    A = as_matrix(A)
    if A.shape[0] != rep.dim:
        raise DimensionMismatch(f"operator dim {A.shape[0]} != representation dim {rep.dim}")
    U = element_unitary(rep, g)
    return U @ A @ U.conj().T


def _validate_rep(rep: UnitaryRep, pair_tol: float = 1e-9) -> UnitaryRep:
    e = identity_element(rep.group)
    if frobenius(element_unitary(rep, e) - np.eye(rep.dim)) > 1e-10:
        raise ValueError(f"representation {rep.name!r} does not map identity to identity")
    if isinstance(rep.group, FiniteGroup):
        els = finite_elements(rep.group)
        mats = [element_unitary(rep, g) for g in els]
        for g in els:
            for h in els:
                gh = compose(rep.group, g, h)
                if frobenius(mats[g.index] @ mats[h.index] - mats[gh.index]) > 1e-10:
                    raise ValueError(
                        f"representation {rep.name!r} breaks the homomorphism at "
                        f"({rep.group.labels[g.index]}, {rep.group.labels[h.index]})"
                    )
    else:
        samples = haar_sample(rep, rng_seed=0x5EED, count=4)
        for g, h in zip(samples[:2], samples[2:]):
            lhs = element_unitary(rep, g) @ element_unitary(rep, h)
            rhs = element_unitary(rep, compose(rep.group, g, h))
            if frobenius(lhs - rhs) > pair_tol:
                raise ValueError(f"representation {rep.name!r} breaks the homomorphism")
    return rep


def u1_rep(weights: Sequence[int], name: str = "") -> UnitaryRep:
    """Diagonal U(1) representation with integer weights: theta -> diag(e^{i w theta})."""
    w = np.asarray(list(weights), dtype=float)
    if w.size < 1:
        raise ValueError("need at least one weight")
    win = tuple(int(x) for x in w)
    rep = UnitaryRep(
        U1,
        int(w.size),
        lambda g: np.diag(np.exp(1j * w * g.theta)),
        name or f"u1{win}",
        meta={"weights": win},
    )
    return _validate_rep(rep)


def su2_fundamental() -> UnitaryRep:
    rep = UnitaryRep(SU2, 2, lambda g: su2_matrix(g.phi, g.theta, g.psi), "su2-fund")
    return _validate_rep(rep)


def _symmetric_isometry_qubits(k: int) -> np.ndarray:
    # isometry from the symmetric subspace of (C^2)^{otimes k}, dim k+1
    dim = 2**k
    S = np.zeros((dim, k + 1))
    for x in range(dim):
        S[x, bin(x).count("1")] = 1.0
    return S / np.sqrt(S.sum(axis=0))


def su2_irrep(dim: int) -> UnitaryRep:
    """Irreducible SU(2) representation of the given dimension (>= 2).

    Realized as the restriction of U^{otimes (dim-1)} to the symmetric
    subspace; dim = 2 is the fundamental.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if dim == 2:
        return su2_fundamental()
    k = dim - 1
    S = _symmetric_isometry_qubits(k)

    def fn(g, _S=S, _k=k):
        U = su2_matrix(g.phi, g.theta, g.psi)
        P = U
        for _ in range(_k - 1):
            P = np.kron(P, U)
        return _S.T @ P @ _S

    return _validate_rep(UnitaryRep(SU2, dim, fn, f"su2-sym{k}"))


def su3_fundamental() -> UnitaryRep:
    rep = UnitaryRep(SU3, 3, lambda g: g.matrix, "su3-fund")
    return _validate_rep(rep)


def _symmetric_isometry_pairs(n: int) -> np.ndarray:
    cols = []
    for i in range(n):
        for j in range(i, n):
            v = np.zeros(n * n)
            if i == j:
                v[i * n + j] = 1.0
            else:
                v[i * n + j] = v[j * n + i] = 1.0 / math.sqrt(2.0)
            cols.append(v)
    return np.array(cols).T


def su3_rep(dim: int) -> UnitaryRep:
    """An SU(3) representation of the given dimension (3..6).

    3 is the fundamental, 6 its symmetric square; 4 and 5 pad the
    fundamental with a trivial block.
    """
    if dim == 3:
        return su3_fundamental()
    if dim in (4, 5):
        pad = dim - 3

        def fn(g, _pad=pad):
            U = np.eye(3 + _pad, dtype=complex)
            U[:3, :3] = g.matrix
            return U

        return _validate_rep(UnitaryRep(SU3, dim, fn, f"su3-fund+{pad}"))
    if dim == 6:
        S = _symmetric_isometry_pairs(3)

        def fn6(g, _S=S):
            return _S.T @ np.kron(g.matrix, g.matrix) @ _S

        return _validate_rep(UnitaryRep(SU3, 6, fn6, "su3-sym2"))
    raise ValueError(f"no built-in SU(3) representation of dimension {dim}")


def trivial_rep(group: GroupDescriptor, dim: int, name: str = "") -> UnitaryRep:
    eye = np.eye(dim, dtype=complex)
    return UnitaryRep(group, dim, lambda g: eye, name or f"trivial{dim}")


def finite_rep(group: FiniteGroup, matrices: Sequence, name: str = "") -> UnitaryRep:
    """Representation of a finite group from one matrix per element."""
    mats = [as_matrix(M, f"matrix for {group.labels[i]}") for i, M in enumerate(matrices)]
    if len(mats) != group.order:
        raise ValueError(f"expected {group.order} matrices, got {len(mats)}")
    d = mats[0].shape[0]
    for M in mats:
        if M.shape[0] != d:
            raise ValueError("representation matrices have mixed dimensions")
    frozen = []
    for M in mats:
        M = M.copy()
        M.setflags(write=False)
        frozen.append(M)
    rep = UnitaryRep(group, d, lambda g, _m=frozen: _m[g.index], name or "finite-rep")
    return _validate_rep(rep)


def direct_sum_rep(*reps: UnitaryRep, name: str = "") -> UnitaryRep:
    """Block-diagonal direct sum of representations of one group."""
    if not reps:
        raise ValueError("need at least one representation")
    group = reps[0].group
    if any(r.group != group for r in reps):
        raise ValueError("direct sum requires a common group")
    total = sum(r.dim for r in reps)

    def fn(g):
        U = np.zeros((total, total), dtype=complex)
        at = 0
        for r in reps:
            U[at : at + r.dim, at : at + r.dim] = r.matrix_fn(g)
            at += r.dim
        return U

    return _validate_rep(UnitaryRep(group, total, fn, name or "+".join(r.name for r in reps)))


def pad_trivial(rep: UnitaryRep, total_dim: int) -> UnitaryRep:
    if total_dim < rep.dim:
        raise ValueError("cannot pad below the representation dimension")
    if total_dim == rep.dim:
        return rep
    return direct_sum_rep(
        rep, trivial_rep(rep.group, total_dim - rep.dim), name=f"{rep.name}+triv{total_dim - rep.dim}"
    )


# ---------------------------------------------------------------------------
# built-in finite groups


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return FiniteGroup(tuple(str(i) for i in range(n)), table, 0)


def cyclic_rep(n: int, dim: int | None = None, weights: Sequence[int] | None = None) -> UnitaryRep:
    """Diagonal representation of Z_n by n-th roots of unity.

    Element j acts as diag(omega^{j w_1}, ..., omega^{j w_d}); the default
    weights are (0, 1, ..., d-1).
    """
    group = cyclic_group(n)
    if weights is None:
        if dim is None:
            dim = n
        weights = tuple(range(dim))
    w = np.asarray(list(weights), dtype=int)

    def fn(g, _w=w, _n=n):
        phases = (g.index * _w) % _n
        return np.diag(np.exp(2j * math.pi * phases / _n))

    return _validate_rep(UnitaryRep(group, int(w.size), fn, f"z{n}-diag"))


_Q8_MATS = {
    "1": np.eye(2, dtype=complex),
    "i": np.array([[1j, 0], [0, -1j]]),
    "j": np.array([[0, 1], [-1, 0]], dtype=complex),
    "k": np.array([[0, 1j], [1j, 0]]),
}


def _q8_matrices() -> list[np.ndarray]:
    mats = []
    for sym in ("1", "i", "j", "k"):
        mats.append(_Q8_MATS[sym])
        mats.append(-_Q8_MATS[sym])
    return mats


def quaternion_group() -> FiniteGroup:
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    mats = _q8_matrices()
    table = np.zeros((8, 8), dtype=int)
    for a in range(8):
        for b in range(8):
            prod = mats[a] @ mats[b]
            matches = [c for c in range(8) if np.allclose(prod, mats[c], atol=1e-12)]
            assert len(matches) == 1
            table[a, b] = matches[0]
    return FiniteGroup(labels, table, 0)


def quaternion_rep(total_dim: int = 2) -> UnitaryRep:
    """The 2x2 representation of Q8 inside SU(2), optionally padded/summed to
    a larger dimension (copies of the 2x2 block plus trivial padding)."""
    group = quaternion_group()
    base = finite_rep(group, _q8_matrices(), "q8-2d")
    if total_dim == 2:
        return base
    copies, pad = divmod(total_dim, 2)
    parts = [base] * copies + ([trivial_rep(group, pad)] if pad else [])
    return direct_sum_rep(*parts, name=f"q8-{total_dim}d")


def product_group(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Direct product with index (i, j) -> i * |b| + j."""
    na, nb = a.order, b.order
    labels = tuple(f"{la}|{lb}" for la in a.labels for lb in b.labels)
    table = np.zeros((na * nb, na * nb), dtype=int)
    for i1 in range(na):
        for j1 in range(nb):
            for i2 in range(na):
                for j2 in range(nb):
                    table[i1 * nb + j1, i2 * nb + j2] = (
                        a.table[i1, i2] * nb + b.table[j1, j2]
                    )
    return FiniteGroup(labels, table, a.identity * nb + b.identity)


def product_rep(ra: UnitaryRep, rb: UnitaryRep) -> UnitaryRep:
    """Outer tensor product of two finite-group representations on the
    product group, U(g1, g2) = U1(g1) kron U2(g2)."""
    if not (isinstance(ra.group, FiniteGroup) and isinstance(rb.group, FiniteGroup)):
        raise ValueError("product_rep is defined for finite groups")
    group = product_group(ra.group, rb.group)
    nb = rb.group.order

    def fn(g, _nb=nb):
        i, j = divmod(g.index, _nb)
        return kron(ra.matrix_fn(FiniteElement(i)), rb.matrix_fn(FiniteElement(j)))

    return _validate_rep(
        UnitaryRep(group, ra.dim * rb.dim, fn, f"({ra.name})x({rb.name})")
    )


# ---------------------------------------------------------------------------
# Haar sampling and quadrature


def philox_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based RNG stream; streams with distinct (seed, stream) keys are
    independent, so per-sample streams commute with execution order."""
    key = np.array([seed % 2**64, stream % 2**64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def haar_unitary(n: int, rng: np.random.Generator, special: bool = True) -> np.ndarray:
    """One Haar-distributed unitary: Ginibre matrix, QR, phase-normalized R
    diagonal; for special=True divide by the principal n-th root of det."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    if special:
        q = q * np.exp(-1j * np.angle(np.linalg.det(q)) / n)
    return q


def haar_sample(rep: UnitaryRep, rng_seed: int, count: int) -> list[GroupElement]:
    """Sample group elements from Haar measure (finite groups: uniform)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    group = rep.group
    out: list[GroupElement] = []
    for i in range(count):
        rng = philox_stream(rng_seed, i)
        if isinstance(group, FiniteGroup):
            out.append(FiniteElement(int(rng.integers(group.order))))
        elif group.kind == "u1":
            out.append(U1Element(float(rng.uniform(0.0, TWO_PI))))
        elif group.kind == "su2":
            out.append(euler_from_su2(haar_unitary(2, rng)))
        else:
            out.append(SU3Element(haar_unitary(3, rng)))
    return out


def _wrap_psi(psi: float) -> float:
    # e^{i psi/2} has period 4pi; fold [0, 4pi) into [-2pi, 2pi]
    return psi - 2.0 * TWO_PI if psi > TWO_PI else psi


def haar_quadrature_su2(f: Callable[[SU2Element], np.ndarray], order: int = 24) -> np.ndarray:
    """Integrate a matrix-valued function over SU(2) Haar measure.

    Product Gauss-Legendre rule in Euler coordinates: phi on [0, 2pi],
    theta on [0, pi] with weight sin(theta), psi on [0, 4pi] (the full
    double-cover range).  Deterministic; accuracy grows with order.
    """
    if order < 4:
        raise ValueError("order must be >= 4")
    x, w = leggauss(order)
    phis = math.pi * (x + 1.0)
    w_phi = w * math.pi
    thetas = (math.pi / 2.0) * (x + 1.0)
    w_theta = w * (math.pi / 2.0) * np.sin(thetas)
    psis = TWO_PI * (x + 1.0)
    w_psi = w * TWO_PI

    acc = None
    mass = 0.0
    for i in range(order):
        for j in range(order):
            for k in range(order):
                weight = w_phi[i] * w_theta[j] * w_psi[k]
                el = SU2Element(phis[i], thetas[j], _wrap_psi(psis[k]))
                val = np.asarray(f(el), dtype=complex)
                acc = weight * val if acc is None else acc + weight * val
                mass += weight
    return acc / mass


def rep_from_config(doc: dict) -> UnitaryRep:
    """Build a representation from a JSON-able config block.

    Recognized kinds: {"kind": "su2", "dim": d}, {"kind": "su3", "dim": d},
    {"kind": "u1", "weights": [...]}, {"kind": "zn", "n": n, "dim": d},
    {"kind": "q8", "dim": d}, and {"kind": "finite", "group": <Cayley doc
    with a rep block>}.  The config is kept on rep.meta["config"].
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("rep config must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "su2":
            rep = su2_irrep(int(doc.get("dim", 2)))
        elif kind == "su3":
            rep = su3_rep(int(doc.get("dim", 3)))
        elif kind == "u1":
            rep = u1_rep([int(w) for w in doc["weights"]])
        elif kind == "zn":
            rep = cyclic_rep(int(doc["n"]), dim=int(doc.get("dim", doc["n"])))
        elif kind == "q8":
            rep = quaternion_rep(int(doc.get("dim", 2)))
        elif kind == "finite":
            _, rep = finite_group_from_json(doc["group"])
            if rep is None:
                raise ValueError("finite rep config needs a 'rep' block in the group document")
        else:
            raise ValueError(f"unknown rep kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed rep config: {exc}") from exc
    rep.meta["config"] = dict(doc)
    return rep


# ---------------------------------------------------------------------------
# JSON Cayley-table documents


def finite_group_to_json(group: FiniteGroup, rep: UnitaryRep | None = None) -> dict:
    doc = {
        "labels": list(group.labels),
        "table": [[int(v) for v in row] for row in group.table],
        "identity": int(group.identity),
    }
    if rep is not None:
        if rep.group != group:
            raise ValueError("representation belongs to a different group")
        doc["rep"] = {
            "dim": rep.dim,
            "matrices": [
                matrix_to_json(element_unitary(rep, g)) for g in finite_elements(group)
            ],
        }
    return doc


def finite_group_from_json(doc: dict) -> tuple[FiniteGroup, UnitaryRep | None]:
    """Parse {"labels", "table", "identity", optional "rep"}; raises
    ValueError on any malformed or inconsistent field."""
    if not isinstance(doc, dict):
        raise ValueError("group document must be a JSON object")
    try:
        labels = tuple(str(s) for s in doc["labels"])
        table = np.asarray(doc["table"], dtype=int)
        identity = int(doc["identity"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed group document: {exc}") from exc
    group = FiniteGroup(labels, table, identity)
    rep = None
    if "rep" in doc and doc["rep"] is not None:
        rdoc = doc["rep"]
        try:
            dim = int(rdoc["dim"])
            mats = [matrix_from_json(m, "rep matrix") for m in rdoc["matrices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed rep block: {exc}") from exc
        if any(M.shape != (dim, dim) for M in mats):
            raise ValueError("rep matrices disagree with the declared dimension")
        rep = finite_rep(group, mats, "json-rep")
    return group, rep
