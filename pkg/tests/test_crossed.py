import numpy as np
import pytest

from wignerlab import (
    CrossedProductModel,
    ResourceCapExceeded,
    algebra_closure,
    covariance_check,
    crossed_dimension,
    cyclic_group,
    cyclic_rep,
    embed,
    kron,
    quaternion_rep,
    regular_unitary,
    tensor_iso_check,
    trivial_rep,
)
from wignerlab.crossed import spanning_generators
from wignerlab.groups import FiniteGroup, finite_elements
from wignerlab.matrixcore import double_commutant


def z2_trivial_m2():
    return CrossedProductModel(trivial_rep(cyclic_group(2), 2))


def z2_inner_m2():
    # action by conjugation with diag(1, -1)
    return CrossedProductModel(cyclic_rep(2, dim=2))


def q8_m2():
    return CrossedProductModel(quaternion_rep())


def test_regular_unitary_identity_and_swap():
    model = z2_trivial_m2()
    e, a = finite_elements(model.group)
    assert np.array_equal(regular_unitary(model, e), np.eye(4))
    swap = np.array([[0, 1], [1, 0]], dtype=float)
    assert np.array_equal(regular_unitary(model, a), kron(np.eye(2), swap))


def test_regular_unitaries_form_representation():
    model = q8_m2()
    els = finite_elements(model.group)
    mats = {g.index: regular_unitary(model, g) for g in els}
    for g in els:
        for h in els:
            gh = model.group.table[g.index, h.index]
            assert np.abs(mats[g.index] @ mats[h.index] - mats[gh]).max() <= 1e-12


def test_embed_unital_and_trivial_action(rng):
    model = z2_trivial_m2()
    assert np.allclose(embed(model, np.eye(2)), np.eye(4))
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.allclose(embed(model, A), kron(A, np.eye(2)))


def test_embed_multiplicative_star_and_injective(rng):
    model = z2_inner_m2()
    A = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.abs(embed(model, A @ B) - embed(model, A) @ embed(model, B)).max() <= 1e-10
    assert np.abs(embed(model, A.conj().T) - embed(model, A).conj().T).max() <= 1e-12
    # isometric scaling pins injectivity: ||Phi(A)||_F = sqrt(|G|) ||A||_F
    assert np.linalg.norm(embed(model, A)) == pytest.approx(
        np.sqrt(model.order) * np.linalg.norm(A), rel=1e-12
    )


def test_covariance_residuals():
    assert covariance_check(z2_trivial_m2()) == 0.0
    assert covariance_check(z2_inner_m2()) <= 1e-12
    assert covariance_check(q8_m2()) <= 1e-12


def test_crossed_dimension_examples():
    assert crossed_dimension(z2_trivial_m2()) == 8
    assert crossed_dimension(CrossedProductModel(trivial_rep(cyclic_group(2), 1))) == 2
    assert crossed_dimension(z2_inner_m2()) == 8


def test_crossed_dimension_q8_inner():
    # inner action: M2 x Q8 is M2 tensor the 8-dimensional group algebra
    assert crossed_dimension(q8_m2()) == 32


def test_closure_matches_double_commutant():
    model = z2_inner_m2()
    gens = spanning_generators(model)
    span = algebra_closure(gens, model.ambient_dim)
    dc = double_commutant(gens, model.ambient_dim)
    assert span.dim == dc.dim == 8


def test_algebra_span_star_closed_and_unital():
    model = q8_m2()
    span = algebra_closure(spanning_generators(model), model.ambient_dim)
    assert span.residual(np.eye(model.ambient_dim)) <= 1e-9
    for M in span.matrices():
        assert span.residual(M.conj().T) <= 1e-9


def test_crossed_dimension_invariant_under_relabeling():
    base = cyclic_group(3)
    perm = np.array([2, 0, 1])
    inv = np.argsort(perm)
    table = np.zeros((3, 3), dtype=int)
    for i in range(3):
        for j in range(3):
            table[perm[i], perm[j]] = perm[base.table[i, j]]
    relabeled = FiniteGroup(("x", "y", "z"), table, int(perm[base.identity]))
    del inv
    a = CrossedProductModel(trivial_rep(base, 2))
    b = CrossedProductModel(trivial_rep(relabeled, 2))
    assert crossed_dimension(a) == crossed_dimension(b)


def test_tensor_iso_z2_pair_of_points():
    m = CrossedProductModel(trivial_rep(cyclic_group(2), 1))
    report = tensor_iso_check([m, m])
    assert report.equal
    assert report.product_of_dims == 4 and report.product_model_dim == 4


def test_tensor_iso_mixed_dims():
    m2 = z2_trivial_m2()
    m1 = CrossedProductModel(trivial_rep(cyclic_group(2), 1))
    report = tensor_iso_check([m2, m1])
    assert report.equal
    assert report.product_of_dims == 16 and report.product_model_dim == 16


def test_tensor_iso_three_factors():
    m = CrossedProductModel(trivial_rep(cyclic_group(2), 1))
    report = tensor_iso_check([m, m, m])
    assert report.equal
    assert report.product_of_dims == 8 and report.product_model_dim == 8


def test_tensor_iso_resource_guard():
    m = q8_m2()
    with pytest.raises(ResourceCapExceeded):
        tensor_iso_check([m, m], ambient_cap=64)


def test_crossed_model_requires_finite_group():
    from wignerlab import su2_fundamental

    with pytest.raises(ValueError):
        CrossedProductModel(su2_fundamental())


def test_nontrivial_inner_action_blocks(rng):
    # embed really uses alpha_g: blocks differ when the action is nontrivial
    model = z2_inner_m2()
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    out = embed(model, A)
    z = np.diag([1.0, -1.0]).astype(complex)
    E0 = np.diag([1.0, 0.0])
    E1 = np.diag([0.0, 1.0])
    expected = kron(A, E0) + kron(z @ A @ z, E1)
    assert np.abs(out - expected).max() <= 1e-14
