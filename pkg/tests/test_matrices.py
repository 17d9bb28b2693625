"""Matrix layer: algebra over exact and floating scalars, shape errors."""

from fractions import Fraction

import numpy as np
import pytest

from lieharm.exact import RationalComplex, rc
from lieharm.lie import elementary, generator
from lieharm.matrices import CMatrix, ShapeError, standard_symplectic


def random_exact(rng, rows, cols):
    m = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            m[i, j] = rc(
                Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7))),
                Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7))),
            )
    return CMatrix(m)


def test_trace_identity():
    assert CMatrix.identity(3).trace() == 3
    assert CMatrix.identity(3, exact=True).trace() == RationalComplex(3)


def test_trace_elementary_product():
    e12, e21 = elementary(3, 1, 2), elementary(3, 2, 1)
    assert (e12 @ e21).trace() == 1


def test_y_generator_self_pairing():
    # Re trace(Y_12 Y_12*) = 1: the orthonormality convention
    y = generator("Y", 2, 1, 2)
    assert np.real((y @ y.conj_transpose()).trace()) == pytest.approx(1.0)


def test_exact_conj_transpose_antihomomorphism():
    rng = np.random.default_rng(0)
    a = random_exact(rng, 3, 4)
    b = random_exact(rng, 4, 2)
    lhs = (a @ b).conj_transpose()
    rhs = b.conj_transpose() @ a.conj_transpose()
    assert lhs.exact_equals(rhs)


def test_exact_associativity():
    rng = np.random.default_rng(1)
    a, b, c = random_exact(rng, 2, 3), random_exact(rng, 3, 3), random_exact(rng, 3, 2)
    assert ((a @ b) @ c).exact_equals(a @ (b @ c))


def test_conjugate_transpose_involution():
    rng = np.random.default_rng(2)
    a = random_exact(rng, 3, 3)
    assert a.conj_transpose().conj_transpose().exact_equals(a)


def test_shape_errors_name_both_shapes():
    a, b = CMatrix.zeros(2, 3), CMatrix.zeros(2, 3)
    with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 3\)"):
        a @ b
    with pytest.raises(ShapeError, match=r"\(2, 3\)"):
        CMatrix.zeros(2, 3).trace()
    with pytest.raises(ShapeError, match=r"\(2, 3\).*\(3, 3\)"):
        a + CMatrix.zeros(3, 3)


def test_mixed_dtype_matmul():
    a = CMatrix(np.eye(2) * 2.0)
    b = random_exact(np.random.default_rng(3), 2, 2)
    out = a @ b
    assert np.allclose(out.to_complex(), 2.0 * b.to_complex())


def test_standard_symplectic_square():
    j = standard_symplectic(3)
    assert np.allclose((j @ j).to_complex(), -np.eye(6))
    j_exact = standard_symplectic(3, exact=True)
    assert (j_exact @ j_exact).exact_equals(CMatrix.identity(6, exact=True).scale(rc(-1)))
