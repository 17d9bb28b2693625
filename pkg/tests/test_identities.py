"""Identity suite: generator sums, coordinate formulas, the four-case
decomposition, the skew-index lemma and the small symplectic facts."""

from fractions import Fraction

import numpy as np
import pytest

from lieharm.diffops import coordinate_function, kappa
from lieharm.exact import rc
from lieharm.identities import (
    IDENTITY_NAMES,
    _sum_conjugations,
    assert_full_coverage,
    block_case,
    check_coordinate_identities,
    check_generator_sums,
    check_kappa_basis_decomposition,
    check_skew_lemma,
    check_symplectic_facts,
    dense_exact_crosscheck,
)
from lieharm.lie import GroupSpec, SO, SP, SU, basis_g, elementary, generator, sample
from lieharm.matrices import CMatrix, standard_symplectic

RNG = np.random.default_rng(99)


# --- generator sums ----------------------------------------------------------


def test_y_sum_single_term_hand_expansion():
    # n=2, alpha=beta=1: Y_12 E_11 Y_12^t = E_22 / 2
    ys = [generator("Y", 2, 1, 2, exact=True)]
    out = _sum_conjugations(ys, 1, 1, 2)
    expect = elementary(2, 2, 2, exact=True).scale(rc(Fraction(1, 2)))
    assert out.exact_equals(expect)


def test_d_sum_diagonal_case():
    ds = [generator("D", 3, t, exact=True) for t in (1, 2, 3)]
    out = _sum_conjugations(ds, 2, 2, 3)
    assert out.exact_equals(elementary(3, 2, 2, exact=True))
    off = _sum_conjugations(ds, 1, 2, 3)
    assert off.exact_equals(CMatrix.zeros(3, 3, exact=True))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_generator_sums_exact(n):
    for result in check_generator_sums(n):
        assert result.exact
        assert result.passed
        assert result.max_residual == 0.0


# --- coordinate identities ------------------------------------------------------


def test_so3_kappa_diagonal_case():
    # kappa(x_11, x_11) = -(x_11^2 - 1)/2
    spec = GroupSpec(SO, 3)
    b = basis_g(spec)
    x = sample(spec, RNG, 0.5)
    val = kappa(coordinate_function(1, 1), coordinate_function(1, 1), x, b)
    expect = -(complex(x[0, 0]) ** 2 - 1.0) / 2.0
    assert abs(val - expect) < 1e-12


def test_su3_kappa_equal_indices():
    # kappa(z_ja, z_ja) = (1/n - 1) z_ja^2
    spec = GroupSpec(SU, 3)
    b = basis_g(spec)
    x = sample(spec, RNG, 0.5)
    val = kappa(coordinate_function(2, 3), coordinate_function(2, 3), x, b)
    expect = (1.0 / 3 - 1.0) * complex(x[1, 2]) ** 2
    assert abs(val - expect) < 1e-12


def test_sp2_kappa_mixed_block_correction():
    # kappa(q_11, q_33) picks up (J)_13 (J)_13 / 2 = 1/2
    spec = GroupSpec(SP, 2)
    b = basis_g(spec)
    j = standard_symplectic(2).to_complex()
    assert j[0, 2] == 1.0
    x = sample(spec, RNG, 0.5)
    val = kappa(coordinate_function(1, 1), coordinate_function(3, 3), x, b)
    base = -0.5 * complex(x[0, 2]) * complex(x[2, 0])
    assert abs(val - base - 0.5) < 1e-12


@pytest.mark.parametrize("family,n", [(SO, 3), (SO, 4), (SU, 2), (SU, 3), (SP, 2), (SP, 3)])
def test_coordinate_identity_suite(family, n):
    rng = np.random.default_rng(17)
    for result in check_coordinate_identities(GroupSpec(family, n), 20, 1e-9, rng):
        assert result.passed, (result.name, result.max_residual)
        assert result.max_residual <= 1e-9


def test_tuple_enumeration_policy():
    rng = np.random.default_rng(18)
    small = check_coordinate_identities(GroupSpec(SO, 3), 2, 1e-9, rng)
    assert small[0].params["tuples"] == 3**4
    big = check_coordinate_identities(GroupSpec(SO, 4), 2, 1e-9, rng)
    assert big[0].params["tuples"] == 50


# --- four-case decomposition ------------------------------------------------------


def test_block_cases():
    assert block_case(1, 1, 2) == 1
    assert block_case(1, 3, 2) == 2
    assert block_case(3, 1, 2) == 3
    assert block_case(3, 3, 2) == 4


def test_decomposition_case1_value():
    # case (1): sum = -E_ba/2
    n = 2
    mats = list(basis_g(GroupSpec(SP, n), exact=True))
    out = _sum_conjugations(mats, 1, 2, 2 * n)
    expect = elementary(2 * n, 2, 1, exact=True).scale(rc(Fraction(-1, 2)))
    assert out.exact_equals(expect)


def test_decomposition_case2_with_j_correction():
    # case (2) with alpha = beta - n: sum = -E_ba/2 + J/2
    n = 2
    mats = list(basis_g(GroupSpec(SP, n), exact=True))
    out = _sum_conjugations(mats, 1, 1 + n, 2 * n)
    expect = elementary(2 * n, 1 + n, 1, exact=True).scale(rc(Fraction(-1, 2)))
    expect = expect + standard_symplectic(n, exact=True).scale(rc(Fraction(1, 2)))
    assert out.exact_equals(expect)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_decomposition_exact_all_pairs(n):
    rng = np.random.default_rng(19)
    results = check_kappa_basis_decomposition(n, samples=0, tol=1e-9, rng=rng)
    assert len(results) == 1
    assert results[0].exact and results[0].passed and results[0].max_residual == 0.0


def test_decomposition_numeric_agreement():
    rng = np.random.default_rng(20)
    results = check_kappa_basis_decomposition(2, samples=10, tol=1e-9, rng=rng)
    numeric = [r for r in results if r.name.endswith("numeric")][0]
    assert numeric.passed and numeric.max_residual <= 1e-9


def test_sparse_matches_dense_reference():
    assert dense_exact_crosscheck(2, 1, 3)
    assert dense_exact_crosscheck(2, 2, 2)


# --- skew lemma ---------------------------------------------------------------------


def test_skew_lemma_equal_first_pair_is_trivial():
    rng = np.random.default_rng(21)
    g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    phi = g - g.T
    j = a = 2
    k, b = 0, 4
    lhs = phi[j, b] * phi[k, a] + phi[j, k] * phi[a, b]
    assert abs(lhs - phi[j, a] * phi[k, b]) < 1e-12


def test_skew_lemma_suite():
    rng = np.random.default_rng(22)
    main, control = check_skew_lemma(1000, 6, rng)
    assert main.passed and main.max_residual <= 1e-12
    assert control.passed and control.params["hit_rate"] >= 0.9


def test_skew_lemma_explicit_counterexample():
    rng = np.random.default_rng(23)
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    phi = g - g.T
    j, a, k, b = 0, 1, 2, 3
    resid = abs(phi[j, b] * phi[k, a] + phi[j, k] * phi[a, b] - phi[j, a] * phi[k, b])
    assert resid > 0.1


# --- symplectic facts ------------------------------------------------------------------


def test_symplectic_facts():
    rng = np.random.default_rng(24)
    inv, traceless = check_symplectic_facts(2, 5, 1e-10, rng)
    assert inv.passed and inv.max_residual <= 1e-10
    assert traceless.passed and traceless.exact and traceless.max_residual == 0.0


# --- coverage ------------------------------------------------------------------------


def test_coverage_enumeration():
    rng = np.random.default_rng(25)
    results = []
    for n in range(2, 3):
        results += check_generator_sums(n)
    for family, n in ((SO, 3), (SU, 2), (SP, 2)):
        results += check_coordinate_identities(GroupSpec(family, n), 2, 1e-9, rng)
    results += check_kappa_basis_decomposition(2, 2, 1e-9, rng)
    results += check_skew_lemma(50, 6, rng)
    results += check_symplectic_facts(2, 2, 1e-10, rng)
    assert_full_coverage(results)
    with pytest.raises(AssertionError, match="skipped"):
        assert_full_coverage(results[:-1])
    assert set(IDENTITY_NAMES) == {r.name for r in results}
