"""Group catalog: generator values, basis dimensions and orthonormality,
algebra membership, Cartan bracket relations, embeddings, sampling."""

import numpy as np
import pytest

from lieharm.lie import (
    GroupSpec,
    SO,
    SO2N_UN,
    SP,
    SPACE_FAMILIES,
    SPN_UN,
    SU,
    SU2N_SPN,
    SUN_SON,
    SymmetricSpaceSpec,
    U_IN_SO2N,
    U_IN_SPN,
    UsageError,
    algebra_dimension,
    basis_g,
    cartan_decomposition,
    embed_unitary,
    generator,
    membership_check,
    rebuild_sample,
    sample,
    sample_dual,
    sample_with_coefficients,
)
from lieharm.matrices import CMatrix, standard_symplectic

RNG = np.random.default_rng(2024)


# --- specs ------------------------------------------------------------------


def test_group_spec_validation():
    with pytest.raises(UsageError):
        GroupSpec("SO", 1)
    with pytest.raises(UsageError):
        GroupSpec("E8", 2)
    assert GroupSpec(SO, 5).matrix_size == 5
    assert GroupSpec(SP, 3).matrix_size == 6
    assert GroupSpec(U_IN_SO2N, 3).matrix_size == 6


def test_space_spec_groups():
    s = SymmetricSpaceSpec(SU2N_SPN, 2)
    assert s.group_spec() == GroupSpec(SU, 4)
    assert s.subgroup_spec() == GroupSpec(SP, 2)
    assert SymmetricSpaceSpec(SO2N_UN, 3).group_spec() == GroupSpec(SO, 6)


# --- generators --------------------------------------------------------------


def test_y_generator_value():
    y = generator("Y", 2, 1, 2).to_complex()
    c = 1 / np.sqrt(2)
    assert np.allclose(y, np.array([[0, c], [-c, 0]]))


def test_generator_precondition():
    with pytest.raises(UsageError):
        generator("X", 3, 2, 2)
    with pytest.raises(UsageError):
        generator("Y", 3, 3, 1)
    with pytest.raises(UsageError):
        generator("D", 3, 4)


def test_x_y_orthogonal():
    x = generator("X", 4, 1, 3)
    y = generator("Y", 4, 1, 3)
    assert abs((x @ y.T).trace()) < 1e-15


def test_exact_generators_match_float():
    for kind in ("X", "Y"):
        e = generator(kind, 3, 1, 2, exact=True).to_complex()
        f = generator(kind, 3, 1, 2).to_complex()
        assert np.max(np.abs(e - f)) < 1e-15


# --- bases -------------------------------------------------------------------


@pytest.mark.parametrize("family,n,dim", [
    (SO, 3, 3), (SO, 6, 15), (SU, 3, 8), (SU, 5, 24),
    (SP, 2, 10), (SP, 3, 21), (U_IN_SPN, 2, 4), (U_IN_SO2N, 4, 16),
])
def test_basis_dimensions(family, n, dim):
    spec = GroupSpec(family, n)
    assert algebra_dimension(spec) == dim
    assert len(basis_g(spec)) == dim


@pytest.mark.parametrize("family", [SO, SU, SP, U_IN_SPN, U_IN_SO2N])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_basis_orthonormal(family, n):
    b = basis_g(GroupSpec(family, n))
    g = b.gram()
    assert np.max(np.abs(g - np.eye(len(b)))) < 1e-12


def test_dimension_closed_forms_all_families():
    for n in range(2, 7):
        assert len(basis_g(GroupSpec(SO, n))) == n * (n - 1) // 2
        assert len(basis_g(GroupSpec(SU, n))) == n * n - 1
        assert len(basis_g(GroupSpec(SP, n))) == n * (2 * n + 1)
        assert len(basis_g(GroupSpec(U_IN_SPN, n))) == n * n
        assert len(basis_g(GroupSpec(U_IN_SO2N, n))) == n * n


@pytest.mark.parametrize("family,n", [(SO, 4), (SP, 2), (U_IN_SPN, 3)])
def test_exact_basis_gram_is_identity(family, n):
    b = basis_g(GroupSpec(family, n), exact=True)
    eye = CMatrix.identity(b.elements[0].rows, exact=True)
    for i, zi in enumerate(b):
        for j, zj in enumerate(b):
            val = np.real(complex((zi @ zj.conj_transpose()).trace()))
            assert val == (1.0 if i == j else 0.0)


def test_exact_su_basis_beyond_two_rejected():
    with pytest.raises(UsageError):
        basis_g(GroupSpec(SU, 3), exact=True)
    assert len(basis_g(GroupSpec(SU, 2), exact=True)) == 3


def test_so_basis_skew_symmetric():
    for z in basis_g(GroupSpec(SO, 5)):
        m = z.to_complex()
        assert np.max(np.abs(m + m.T)) < 1e-15
        assert np.max(np.abs(np.imag(m))) == 0


def test_su_basis_skew_hermitian_traceless():
    for z in basis_g(GroupSpec(SU, 4)):
        m = z.to_complex()
        assert np.max(np.abs(m + np.conj(m.T))) < 1e-15
        assert abs(np.trace(m)) < 1e-15


def test_sp_basis_conditions():
    # dim sp(2) = 10; every element satisfies Z^t J + J Z = 0 and Z* = -Z
    b = basis_g(GroupSpec(SP, 2))
    assert len(b) == 10
    j = standard_symplectic(2).to_complex()
    for z in b:
        m = z.to_complex()
        assert np.max(np.abs(m.T @ j + j @ m)) < 1e-12
        assert np.max(np.abs(np.conj(m.T) + m)) < 1e-12


# --- Cartan decomposition -----------------------------------------------------


@pytest.mark.parametrize("family,n,dims", [
    (SUN_SON, 3, (3, 5)), (SPN_UN, 2, (4, 6)), (SO2N_UN, 3, (9, 6)), (SU2N_SPN, 2, (10, 5)),
])
def test_cartan_dimensions(family, n, dims):
    k, m = cartan_decomposition(SymmetricSpaceSpec(family, n))
    assert (len(k), len(m)) == dims
    g = basis_g(SymmetricSpaceSpec(family, n).group_spec())
    assert len(k) + len(m) == len(g)


def _bracket_components(z, w, stack):
    br = z @ w - w @ z
    return np.einsum("ij,bij->b", br, np.conj(stack)).real


@pytest.mark.parametrize("family", SPACE_FAMILIES)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_cartan_bracket_relations(family, n):
    space = SymmetricSpaceSpec(family, n)
    k, m = cartan_decomposition(space)
    ks, ms = k.stack(), m.stack()
    rng = np.random.default_rng(5)

    def pick(stack):
        return stack[rng.integers(0, len(stack))]

    for _ in range(6):
        # [k, k] in k, [k, m] in m, [m, m] in k: vanishing complement components
        assert np.max(np.abs(_bracket_components(pick(ks), pick(ks), ms))) < 1e-12
        assert np.max(np.abs(_bracket_components(pick(ks), pick(ms), ks))) < 1e-12
        assert np.max(np.abs(_bracket_components(pick(ms), pick(ms), ms))) < 1e-12


def test_k_and_m_mutually_orthogonal():
    for family, n in [(SUN_SON, 3), (SPN_UN, 2), (SO2N_UN, 2), (SU2N_SPN, 2)]:
        k, m = cartan_decomposition(SymmetricSpaceSpec(family, n))
        cross = np.einsum("aij,bij->ab", k.stack(), np.conj(m.stack())).real
        assert np.max(np.abs(cross)) < 1e-12


# --- embedding ----------------------------------------------------------------


def test_unitary_embedding_lands_in_so_and_sp():
    rng = np.random.default_rng(8)
    for n in (2, 3):
        z = sample(GroupSpec(U_IN_SPN, n), rng)  # already embedded
        for family in (U_IN_SO2N, U_IN_SPN):
            rep = membership_check(GroupSpec(family, n), z)
            assert rep.max_residual < 1e-12


def test_embed_unitary_block_structure():
    rng = np.random.default_rng(9)
    # build an honest unitary via the SU(2) sampler and a phase
    u = sample(GroupSpec(SU, 2), rng).to_complex() * np.exp(0.3j)
    m = embed_unitary(u)
    rep = membership_check(GroupSpec(U_IN_SO2N, 2), CMatrix(m))
    assert rep.max_residual < 1e-10
    assert np.allclose(m[:2, :2], np.real(u))
    assert np.allclose(m[:2, 2:], np.imag(u))


# --- sampling -----------------------------------------------------------------


def test_sample_sigma_zero_limit_is_identity():
    x = sample(GroupSpec(SU, 3), np.random.default_rng(0), sigma=1e-12)
    assert np.max(np.abs(x.to_complex() - np.eye(3))) < 1e-10


def test_sample_su3_membership():
    x = sample(GroupSpec(SU, 3), np.random.default_rng(1), sigma=0.5)
    rep = membership_check(GroupSpec(SU, 3), x)
    assert rep.unitarity <= 1e-10 and rep.determinant <= 1e-10


def test_sample_sp2_preserves_j():
    q = sample(GroupSpec(SP, 2), np.random.default_rng(2), sigma=0.5).to_complex()
    j = standard_symplectic(2).to_complex()
    assert np.max(np.abs(q @ j @ q.T - j)) <= 1e-10


def test_sample_so6_membership():
    x = sample(GroupSpec(SO, 6), np.random.default_rng(3), sigma=0.5)
    assert membership_check(GroupSpec(SO, 6), x).max_residual <= 1e-10


def test_rebuild_sample_is_bitwise():
    spec = GroupSpec(SP, 2)
    x, coeffs = sample_with_coefficients(spec, np.random.default_rng(4), 0.5)
    y = rebuild_sample(spec, coeffs)
    assert np.array_equal(x.to_complex(), y.to_complex())


def test_sigma_must_be_positive():
    with pytest.raises(UsageError):
        sample(GroupSpec(SO, 3), np.random.default_rng(0), sigma=0.0)


# --- dual sampling -------------------------------------------------------------


def test_dual_sample_special_linear_not_unitary():
    space = SymmetricSpaceSpec(SUN_SON, 2)
    rng = np.random.default_rng(11)
    hits = 0
    for _ in range(5):
        x = sample_dual(space, rng, sigma=0.5).to_complex()
        assert abs(np.linalg.det(x) - 1) <= 1e-10
        if np.max(np.abs(x @ np.conj(x.T) - np.eye(2))) > 1e-3:
            hits += 1
    assert hits >= 4  # generically far from unitary


def test_dual_sample_zero_coefficients_is_identity():
    space = SymmetricSpaceSpec(SUN_SON, 2)
    x = sample_dual(space, np.random.default_rng(12), sigma=1e-14).to_complex()
    assert np.max(np.abs(x - np.eye(2))) < 1e-12


def test_dual_pure_m_part_is_positive_definite():
    # i m for SU(n)/SO(n) is real symmetric traceless; exp of it is real SPD
    from scipy.linalg import expm

    _, m = cartan_decomposition(SymmetricSpaceSpec(SUN_SON, 2))
    coeffs = np.array([0.4, -0.7])
    x = expm(1j * np.tensordot(coeffs, m.stack(), axes=1))
    assert np.max(np.abs(np.imag(x))) < 1e-12
    xr = np.real(x)
    assert np.max(np.abs(xr - xr.T)) < 1e-12
    assert np.all(np.linalg.eigvalsh(xr) > 0)


# --- membership diagnostics ------------------------------------------------------


def test_membership_identity_clean():
    rep = membership_check(GroupSpec(SU, 2), CMatrix.identity(2))
    assert rep.max_residual == 0.0


def test_membership_detects_scaling():
    x = CMatrix(np.diag([2.0, 0.5]).astype(complex))
    rep = membership_check(GroupSpec(SU, 2), x)
    assert rep.unitarity == pytest.approx(3.0)
    assert rep.determinant == pytest.approx(0.0, abs=1e-15)
