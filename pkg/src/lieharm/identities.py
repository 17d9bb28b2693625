"""Stand-alone checks of every auxiliary identity the verification rests on:
coordinate-function formulas for SO(n), SU(n), Sp(n), the generator-sum
identities, the four-case basis-sum decomposition behind the Sp(n) kappa
formula, the skew-matrix index lemma, and two small symplectic facts.

The generator-sum and decomposition checks run in exact arithmetic
end-to-end; their residual is required to be identically zero, not small.
The exact sums exploit E_ab = e_a e_b^t, so Q E_ab Q^t is the outer product
of two columns of Q and only the handful of nonzero entries are touched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from .diffops import coordinate_sweep
from .exact import RationalComplex, rc
from .lie import (
    SO,
    SP,
    SU,
    GroupSpec,
    UsageError,
    basis_g,
    generator,
    sample,
)
from .matrices import CMatrix, standard_symplectic

IDENTITY_NAMES = (
    "generator_sum_X",
    "generator_sum_Y",
    "generator_sum_D",
    "coordinate_tau_SO",
    "coordinate_kappa_SO",
    "coordinate_tau_SU",
    "coordinate_kappa_SU",
    "coordinate_tau_Sp",
    "coordinate_kappa_Sp",
    "kappa_basis_decomposition_exact",
    "kappa_basis_decomposition_numeric",
    "skew_index_lemma",
    "skew_index_lemma_negative_control",
    "symplectic_conjugation_invariance",
    "symmetric_times_skew_traceless",
)


@dataclass
class IdentityCheckResult:
    name: str
    params: Dict = field(default_factory=dict)
    max_residual: float = 0.0
    passed: bool = True
    exact: bool = False
    detail: str = ""

    def merge(self, residual: float, ok: bool):
        self.max_residual = max(self.max_residual, residual)
        self.passed = self.passed and ok


# ---------------------------------------------------------------------------
# exact generator sums
# ---------------------------------------------------------------------------


def _exact_columns(m: CMatrix) -> List[List[Tuple[int, RationalComplex]]]:
    """Sparse columns of an exact matrix: per column, the (row, value) pairs."""
    cols = [[] for _ in range(m.cols)]
    for i in range(m.rows):
        for j in range(m.cols):
            v = m.data[i, j]
            if not v.is_zero():
                cols[j].append((i, v))
    return cols


def _sum_conjugations(
    mats: List[CMatrix],
    alpha: int,
    beta: int,
    size: int,
    columns: Optional[List[List[List[Tuple[int, RationalComplex]]]]] = None,
) -> CMatrix:
    """sum_Q Q E_{alpha beta} Q^t exactly, via Q E_ab Q^t = (col_a Q)(col_b Q)^t."""
    if columns is None:
        columns = [_exact_columns(m) for m in mats]
    acc = CMatrix.zeros(size, size, exact=True).data.copy()
    for cols in columns:
        for (i, vi) in cols[alpha - 1]:
            for (j, vj) in cols[beta - 1]:
                acc[i, j] = acc[i, j] + vi * vj
    return CMatrix(acc)


def _dense_sum_conjugations(mats: List[CMatrix], alpha: int, beta: int, size: int) -> CMatrix:
    """Reference path: the same sum by dense exact matrix products."""
    from .lie import elementary

    e = elementary(size, alpha, beta, exact=True)
    acc = CMatrix.zeros(size, size, exact=True)
    for m in mats:
        acc = acc + (m @ e @ m.transpose())
    return acc


def _exact_residual(actual: CMatrix, expected: CMatrix) -> float:
    if actual.exact_equals(expected):
        return 0.0
    return (actual - expected).max_abs()


def check_generator_sums(n: int) -> List[IdentityCheckResult]:
    """The three closed forms, in exact arithmetic for all 1 <= alpha, beta <= n:

      sum_{r<s} X_rs E_ab X_rs^t = (delta_ab I + (-1)^{delta_ab} E_ba)/2
      sum_{r<s} Y_rs E_ab Y_rs^t = (delta_ab I - E_ba)/2
      sum_t    D_t  E_ab D_t^t   = delta_ab E_ba
    """
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    xs = [generator("X", n, r, s, exact=True) for r in range(1, n + 1) for s in range(r + 1, n + 1)]
    ys = [generator("Y", n, r, s, exact=True) for r in range(1, n + 1) for s in range(r + 1, n + 1)]
    ds = [generator("D", n, t, exact=True) for t in range(1, n + 1)]
    xs_cols = [_exact_columns(m) for m in xs]
    ys_cols = [_exact_columns(m) for m in ys]
    ds_cols = [_exact_columns(m) for m in ds]

    half = rc(Fraction(1, 2))
    results = [
        IdentityCheckResult("generator_sum_X", {"n": n}, exact=True),
        IdentityCheckResult("generator_sum_Y", {"n": n}, exact=True),
        IdentityCheckResult("generator_sum_D", {"n": n}, exact=True),
    ]
    eye = CMatrix.identity(n, exact=True)
    for alpha in range(1, n + 1):
        for beta in range(1, n + 1):
            delta = 1 if alpha == beta else 0
            from .lie import elementary

            e_ba = elementary(n, beta, alpha, exact=True)
            expected_x = (eye.scale(rc(delta)) + e_ba.scale(rc((-1) ** delta))).scale(half)
            expected_y = (eye.scale(rc(delta)) - e_ba).scale(half)
            expected_d = e_ba.scale(rc(delta))
            for res, mats, cols, expected in (
                (results[0], xs, xs_cols, expected_x),
                (results[1], ys, ys_cols, expected_y),
                (results[2], ds, ds_cols, expected_d),
            ):
                actual = _sum_conjugations(mats, alpha, beta, n, cols)
                r = _exact_residual(actual, expected)
                res.merge(r, r == 0.0)
    return results


# ---------------------------------------------------------------------------
# coordinate-function identities
# ---------------------------------------------------------------------------


def _tau_factor(family: str, size: int) -> float:
    if family == SO:
        return -(size - 1) / 2.0
    if family == SU:
        return -(size * size - 1) / size
    return -(size + 1) / 2.0  # Sp(n) realised on 2n x 2n: -(2n+1)/2 with size = 2n


def _index_tuples(size: int, exhaustive: bool, count: int, rng: np.random.Generator):
    if exhaustive:
        return list(product(range(size), repeat=4))
    picks = rng.integers(0, size, size=(count, 4))
    return [tuple(int(v) for v in row) for row in picks]


def check_coordinate_identities(
    spec: GroupSpec,
    samples: int,
    tol: float,
    rng: np.random.Generator,
    sigma: float = 0.5,
    tuple_count: int = 50,
) -> List[IdentityCheckResult]:
    """tau and kappa of the matrix coefficients against their closed forms.

    All index tuples are enumerated when the family parameter n <= 3;
    above that a seeded random subset of `tuple_count` tuples is used.
    For Sp(n) the kappa form carries the (J)_jk (J)_ab / 2 correction.
    """
    if spec.family not in (SO, SU, SP):
        raise UsageError(f"coordinate identities apply to SO/SU/Sp, got {spec.family}")
    size = spec.matrix_size
    b = basis_g(spec)
    lam = _tau_factor(spec.family, size)
    j_mat = standard_symplectic(spec.n).to_complex() if spec.family == SP else None
    exhaustive = spec.n <= 3
    tuples = _index_tuples(size, exhaustive, tuple_count, rng)

    tau_res = IdentityCheckResult(
        f"coordinate_tau_{spec.family}", {"n": spec.n, "tuples": len(tuples)}
    )
    kap_res = IdentityCheckResult(
        f"coordinate_kappa_{spec.family}", {"n": spec.n, "tuples": len(tuples)}
    )
    for _ in range(samples):
        x = sample(spec, rng, sigma)
        x0, first, second = coordinate_sweep(x, b)
        t_all = second.sum(axis=0)
        r_tau = float(np.max(np.abs(t_all - lam * x0)))
        tau_res.merge(r_tau, r_tau <= tol)
        kap_all = np.einsum("bja,bkc->jakc", first, first)
        worst = 0.0
        for (j, a, k, c) in tuples:
            if spec.family == SO:
                expect = -0.5 * (x0[j, c] * x0[k, a] - (j == k) * (a == c))
            elif spec.family == SU:
                expect = -x0[j, c] * x0[k, a] + x0[j, a] * x0[k, c] / size
            else:
                expect = -0.5 * x0[j, c] * x0[k, a] + 0.5 * j_mat[j, k] * j_mat[a, c]
            r = abs(kap_all[j, a, k, c] - expect)
            if r > worst:
                worst = r
                if r > tol:
                    kap_res.params["worst_tuple"] = [j + 1, a + 1, k + 1, c + 1]
        kap_res.merge(worst, worst <= tol)
    return [tau_res, kap_res]


# ---------------------------------------------------------------------------
# the four-case decomposition behind the Sp(n) kappa formula
# ---------------------------------------------------------------------------


def _expected_decomposition(alpha: int, beta: int, n: int) -> CMatrix:
    """-E_ba/2 + (J)_ab J/2 exactly (1-based alpha, beta in [1, 2n])."""
    size = 2 * n
    half = rc(Fraction(1, 2))
    out = CMatrix.zeros(size, size, exact=True).data.copy()
    out[beta - 1, alpha - 1] = out[beta - 1, alpha - 1] - half
    j = standard_symplectic(n, exact=True)
    j_ab = j.data[alpha - 1, beta - 1]
    if not j_ab.is_zero():
        w = j_ab * half
        for i in range(n):
            out[i, n + i] = out[i, n + i] + w
            out[n + i, i] = out[n + i, i] - w
    return CMatrix(out)


def block_case(alpha: int, beta: int, n: int) -> int:
    top_a = alpha <= n
    top_b = beta <= n
    if top_a and top_b:
        return 1
    if top_a:
        return 2
    if top_b:
        return 3
    return 4


def check_kappa_basis_decomposition(
    n: int,
    samples: int,
    tol: float,
    rng: np.random.Generator,
    sigma: float = 0.5,
    all_pairs: bool = True,
) -> List[IdentityCheckResult]:
    """Exactly: sum_{Q in basis sp(n)} Q E_ab Q^t = -E_ba/2 + (J)_ab J/2 for
    every block case of (alpha, beta); numerically: conjugating that sum by
    sampled q reproduces kappa of the coordinate functions."""
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    size = 2 * n
    mats = list(basis_g(GroupSpec(SP, n), exact=True))
    columns = [_exact_columns(m) for m in mats]
    exact_res = IdentityCheckResult(
        "kappa_basis_decomposition_exact", {"n": n, "cases": "1-4"}, exact=True
    )
    pairs = (
        [(a, b) for a in range(1, size + 1) for b in range(1, size + 1)]
        if all_pairs
        else [(1, 1), (1, n + 1), (n + 1, 1), (n + 1, n + 1)]
    )
    sums = {}
    for alpha, beta in pairs:
        actual = _sum_conjugations(mats, alpha, beta, size, columns)
        sums[(alpha, beta)] = actual
        r = _exact_residual(actual, _expected_decomposition(alpha, beta, n))
        exact_res.merge(r, r == 0.0)
        exact_res.params[f"case{block_case(alpha, beta, n)}"] = "checked"

    if samples <= 0:
        return [exact_res]
    spec = GroupSpec(SP, n)
    b = basis_g(spec)
    numeric_res = IdentityCheckResult("kappa_basis_decomposition_numeric", {"n": n})
    rep_pairs = [(1, 1), (1, n + 1), (n + 1, 1), (n + 1, n + 1)]
    for _ in range(samples):
        q = sample(spec, rng, sigma)
        qc = q.to_complex()
        _, first, _ = coordinate_sweep(q, b)
        kap_all = np.einsum("bja,bkc->jakc", first, first)
        for alpha, beta in rep_pairs:
            middle = sums.get((alpha, beta))
            if middle is None:
                middle = _sum_conjugations(mats, alpha, beta, size, columns)
            conj = qc @ middle.to_complex() @ qc.T
            r = float(np.max(np.abs(kap_all[:, alpha - 1, :, beta - 1] - conj)))
            numeric_res.merge(r, r <= tol)
    return [exact_res, numeric_res]


# ---------------------------------------------------------------------------
# the skew-matrix index lemma
# ---------------------------------------------------------------------------


def _lemma_residual(phi: np.ndarray, j: int, a: int, k: int, b: int) -> float:
    return abs(phi[j, b] * phi[k, a] + phi[j, k] * phi[a, b] - phi[j, a] * phi[k, b])


def check_skew_lemma(
    samples: int,
    n: int,
    rng: np.random.Generator,
    tol: float = 1e-12,
    control_threshold: float = 0.1,
    control_rate: float = 0.9,
) -> List[IdentityCheckResult]:
    """For complex skew-symmetric Phi and indices with a forced coincidence:
    Phi_jb Phi_ka + Phi_jk Phi_ab = Phi_ja Phi_kb.  A companion negative
    control shows the coincidence hypothesis is necessary: with all four
    indices distinct the residual is generically large."""
    if n < 3:
        raise UsageError(f"n must be >= 3 to have room for index tuples, got {n}")
    main = IdentityCheckResult("skew_index_lemma", {"n": n, "samples": samples})
    control = IdentityCheckResult(
        "skew_index_lemma_negative_control", {"n": n, "samples": samples}
    )
    control_hits = 0
    can_distinct = n >= 4
    for _ in range(samples):
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        phi = g - g.T
        idx = rng.integers(0, n, size=4)
        # force a coincidence between two of the four slots
        slots = rng.permutation(4)[:2]
        idx[slots[1]] = idx[slots[0]]
        j, a, k, b = (int(v) for v in idx)
        r = _lemma_residual(phi, j, a, k, b)
        main.merge(r, r <= tol)
        if can_distinct:
            picks = rng.permutation(n)[:4]
            j, a, k, b = (int(v) for v in picks)
            if _lemma_residual(phi, j, a, k, b) > control_threshold:
                control_hits += 1
    if can_distinct:
        rate = control_hits / samples
        control.params["hit_rate"] = round(rate, 4)
        control.max_residual = 1.0 - rate
        control.passed = rate >= control_rate
    else:
        control.detail = "n < 4: no all-distinct tuples exist"
    return [main, control]


# ---------------------------------------------------------------------------
# small symplectic facts
# ---------------------------------------------------------------------------


def check_symplectic_facts(
    n: int, samples: int, tol: float, rng: np.random.Generator, sigma: float = 0.5
) -> List[IdentityCheckResult]:
    """q J q^t = J at sampled q in Sp(n), and trace(A J) = 0 exactly for
    random rational symmetric A."""
    spec = GroupSpec(SP, n)
    j = standard_symplectic(n).to_complex()
    inv = IdentityCheckResult("symplectic_conjugation_invariance", {"n": n})
    for _ in range(samples):
        q = sample(spec, rng, sigma).to_complex()
        r = float(np.max(np.abs(q @ j @ q.T - j)))
        inv.merge(r, r <= tol)

    tr = IdentityCheckResult("symmetric_times_skew_traceless", {"n": n}, exact=True)
    size = 2 * n
    j_exact = standard_symplectic(n, exact=True)
    for _ in range(samples):
        m = CMatrix.zeros(size, size, exact=True).data.copy()
        for i in range(size):
            for jj in range(i, size):
                v = rc(
                    Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))),
                    Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))),
                )
                m[i, jj] = v
                m[jj, i] = v
        a = CMatrix(m)
        t = (a @ j_exact).trace()
        ok = t.is_zero()
        tr.merge(0.0 if ok else abs(complex(t)), ok)
    return [inv, tr]


def dense_exact_crosscheck(n: int, alpha: int, beta: int) -> bool:
    """Sparse and dense exact conjugation sums agree (dual-route guard)."""
    mats = list(basis_g(GroupSpec(SP, n), exact=True))
    size = 2 * n
    return _sum_conjugations(mats, alpha, beta, size).exact_equals(
        _dense_sum_conjugations(mats, alpha, beta, size)
    )


def covered_identity_names(results: List[IdentityCheckResult]) -> set:
    return {r.name for r in results}


def assert_full_coverage(results: List[IdentityCheckResult]):
    missing = set(IDENTITY_NAMES) - covered_identity_names(results)
    if missing:
        raise AssertionError(f"identity suite skipped checks: {sorted(missing)}")
