"""Catalog of the classical groups in play: orthonormal Lie-algebra bases,
Cartan decompositions of the four symmetric pairs, embeddings, random
sampling and membership diagnostics.

Conventions.  The inner product is g(Z, W) = Re trace(Z W*); every basis
below is orthonormal for it.  Elementary matrices E_rs, the symmetric /
skew-symmetric / diagonal generators

    X_rs = (E_rs + E_sr)/sqrt2,   Y_rs = (E_rs - E_sr)/sqrt2,   D_r = E_rr,

and the complex structure J = [[0, I], [-I, 0]] are available both as
floating matrices and exactly over Q(sqrt 2).  A unitary z = x + iy embeds
into the 2n x 2n real matrices as [[x, y], [-y, x]]; that single embedding
realises U(n) inside both SO(2n) and Sp(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from .exact import INV_SQRT2, RC_I, RC_ONE, RationalComplex
from .matrices import CMatrix, ShapeError, standard_symplectic

SO = "SO"
SU = "SU"
SP = "Sp"
U_IN_SO2N = "U_in_SO2n"
U_IN_SPN = "U_in_Spn"

GROUP_FAMILIES = (SO, SU, SP, U_IN_SO2N, U_IN_SPN)

SUN_SON = "sun_son"
SPN_UN = "spn_un"
SO2N_UN = "so2n_un"
SU2N_SPN = "su2n_spn"

SPACE_FAMILIES = (SUN_SON, SPN_UN, SO2N_UN, SU2N_SPN)


class UsageError(ValueError):
    """Invalid argument for a catalog operation."""


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in GROUP_FAMILIES:
            raise UsageError(f"unknown group family {self.family!r}")
        if self.n < 2:
            raise UsageError(f"n must be >= 2, got {self.n}")

    @property
    def matrix_size(self) -> int:
        return self.n if self.family in (SO, SU) else 2 * self.n

    def __str__(self):
        return f"{self.family}({self.n})"


@dataclass(frozen=True)
class SymmetricSpaceSpec:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in SPACE_FAMILIES:
            raise UsageError(f"unknown symmetric-space family {self.family!r}")
        if self.n < 2:
            raise UsageError(f"n must be >= 2, got {self.n}")

    @property
    def matrix_size(self) -> int:
        return self.n if self.family == SUN_SON else 2 * self.n

    def group_spec(self) -> GroupSpec:
        """The dividend group G."""
        if self.family == SUN_SON:
            return GroupSpec(SU, self.n)
        if self.family == SPN_UN:
            return GroupSpec(SP, self.n)
        if self.family == SO2N_UN:
            return GroupSpec(SO, 2 * self.n)
        return GroupSpec(SU, 2 * self.n)

    def subgroup_spec(self) -> GroupSpec:
        """The divisor group K, in its embedded realisation."""
        if self.family == SUN_SON:
            return GroupSpec(SO, self.n)
        if self.family == SPN_UN:
            return GroupSpec(U_IN_SPN, self.n)
        if self.family == SO2N_UN:
            return GroupSpec(U_IN_SO2N, self.n)
        return GroupSpec(SP, self.n)

    def __str__(self):
        names = {
            SUN_SON: f"SU({self.n})/SO({self.n})",
            SPN_UN: f"Sp({self.n})/U({self.n})",
            SO2N_UN: f"SO({2 * self.n})/U({self.n})",
            SU2N_SPN: f"SU({2 * self.n})/Sp({self.n})",
        }
        return names[self.family]


# ---------------------------------------------------------------------------
# elementary generators
# ---------------------------------------------------------------------------


def elementary(n: int, r: int, s: int, exact: bool = False) -> CMatrix:
    """E_rs with a single 1 at (r, s); indices are 1-based."""
    if not (1 <= r <= n and 1 <= s <= n):
        raise UsageError(f"elementary: indices ({r},{s}) out of range for n={n}")
    m = CMatrix.zeros(n, n, exact=exact).data.copy()
    m[r - 1, s - 1] = RC_ONE if exact else 1.0 + 0.0j
    return CMatrix(m)


def generator(kind: str, n: int, r: int, s: Optional[int] = None, exact: bool = False) -> CMatrix:
    """X_rs, Y_rs (1 <= r < s <= n) or D_r (1 <= r <= n)."""
    if kind == "D":
        if s is not None and s != r:
            raise UsageError("generator: D takes a single index")
        if not 1 <= r <= n:
            raise UsageError(f"generator: D index {r} out of range for n={n}")
        return elementary(n, r, r, exact=exact)
    if kind not in ("X", "Y"):
        raise UsageError(f"generator: unknown kind {kind!r}")
    if s is None or not (1 <= r < s <= n):
        raise UsageError(f"generator: need 1 <= r < s <= n, got r={r}, s={s}, n={n}")
    m = CMatrix.zeros(n, n, exact=exact).data.copy()
    if exact:
        half = RationalComplex(INV_SQRT2)
        m[r - 1, s - 1] = half
        m[s - 1, r - 1] = half if kind == "X" else -half
    else:
        c = 1.0 / np.sqrt(2.0)
        m[r - 1, s - 1] = c
        m[s - 1, r - 1] = c if kind == "X" else -c
    return CMatrix(m)


def _scale(m: CMatrix, scalar) -> CMatrix:
    return m.scale(scalar)


def _i_times(m: CMatrix, exact: bool) -> CMatrix:
    return m.scale(RC_I) if exact else m.scale(1j)


def _two_block_diag(a: CMatrix, d: CMatrix, exact: bool) -> CMatrix:
    n = a.rows
    out = CMatrix.zeros(2 * n, 2 * n, exact=exact).data.copy()
    out[:n, :n] = a.data
    out[n:, n:] = d.data
    return CMatrix(out)


def _two_block_off(b: CMatrix, c: CMatrix, exact: bool) -> CMatrix:
    n = b.rows
    out = CMatrix.zeros(2 * n, 2 * n, exact=exact).data.copy()
    out[:n, n:] = b.data
    out[n:, :n] = c.data
    return CMatrix(out)


# ---------------------------------------------------------------------------
# orthonormal bases
# ---------------------------------------------------------------------------


@dataclass
class AlgebraBasis:
    """Ordered orthonormal basis of a matrix Lie algebra."""

    name: str
    elements: List[CMatrix]
    exact: bool = False
    _stack: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def stack(self) -> np.ndarray:
        """All elements as one (count, size, size) complex array."""
        if self._stack is None:
            self._stack = np.stack([e.to_complex() for e in self.elements])
        return self._stack

    def gram(self) -> np.ndarray:
        s = self.stack()
        return np.real(np.einsum("aij,bij->ab", s, np.conj(s)))


def _traceless_diagonal(n: int, t: int) -> CMatrix:
    """(D_1 + ... + D_t - t D_{t+1}) / sqrt(t(t+1)); unit norm, mutually orthogonal."""
    m = np.zeros((n, n), dtype=complex)
    c = 1.0 / np.sqrt(t * (t + 1))
    for j in range(t):
        m[j, j] = c
    m[t, t] = -t * c
    return CMatrix(m)


def so_basis(n: int, exact: bool = False) -> AlgebraBasis:
    els = [generator("Y", n, r, s, exact=exact) for r in range(1, n + 1) for s in range(r + 1, n + 1)]
    return AlgebraBasis(f"so({n})", els, exact=exact)


def su_basis(n: int, exact: bool = False) -> AlgebraBasis:
    """Y_rs, i X_rs and i H_t with H_t the traceless diagonals.

    Exact construction needs sqrt(t(t+1)) rational multiples of sqrt2,
    which only happens for n = 2; larger n is floating-point only.
    """
    if exact and n > 2:
        raise UsageError(f"exact su({n}) basis needs radicals outside Q(sqrt2)")
    els: List[CMatrix] = []
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            els.append(generator("Y", n, r, s, exact=exact))
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            els.append(_i_times(generator("X", n, r, s, exact=exact), exact))
    for t in range(1, n):
        if exact:
            # n == 2 only: H_1 = (D_1 - D_2)/sqrt2
            h = CMatrix.zeros(n, n, exact=True).data.copy()
            h[0, 0] = RationalComplex(INV_SQRT2)
            h[1, 1] = -RationalComplex(INV_SQRT2)
            els.append(_i_times(CMatrix(h), True))
        else:
            els.append(_i_times(_traceless_diagonal(n, t), False))
    return AlgebraBasis(f"su({n})", els, exact=exact)


def _sp_families(n: int, exact: bool):
    """The seven generator families of sp(n), each scaled by 1/sqrt2."""
    half = RationalComplex(INV_SQRT2) if exact else 1.0 / np.sqrt(2.0)
    xs = [generator("X", n, r, s, exact=exact) for r in range(1, n + 1) for s in range(r + 1, n + 1)]
    ys = [generator("Y", n, r, s, exact=exact) for r in range(1, n + 1) for s in range(r + 1, n + 1)]
    ds = [generator("D", n, t, exact=exact) for t in range(1, n + 1)]

    fams: List[List[CMatrix]] = [[] for _ in range(7)]
    for y in ys:
        fams[0].append(_scale(_two_block_diag(y, y, exact), half))
    for x in xs:
        ix = _i_times(x, exact)
        fams[1].append(_scale(_two_block_diag(ix, -ix, exact), half))
    for d in ds:
        idm = _i_times(d, exact)
        fams[2].append(_scale(_two_block_diag(idm, -idm, exact), half))
    for x in xs:
        fams[3].append(_scale(_two_block_off(x, -x, exact), half))
    for x in xs:
        ix = _i_times(x, exact)
        fams[4].append(_scale(_two_block_off(ix, ix, exact), half))
    for d in ds:
        fams[5].append(_scale(_two_block_off(d, -d, exact), half))
    for d in ds:
        idm = _i_times(d, exact)
        fams[6].append(_scale(_two_block_off(idm, idm, exact), half))
    return fams


def sp_basis(n: int, exact: bool = False) -> AlgebraBasis:
    fams = _sp_families(n, exact)
    els = [m for fam in fams for m in fam]
    return AlgebraBasis(f"sp({n})", els, exact=exact)


def u_embedded_basis(n: int, exact: bool = False) -> AlgebraBasis:
    """u(n) pushed through z = x + iy -> [[x, y], [-y, x]]; lies in both so(2n) and sp(n)."""
    fams = _sp_families(n, exact)
    els = fams[0] + fams[3] + fams[5]
    return AlgebraBasis(f"u({n})-embedded", els, exact=exact)


@lru_cache(maxsize=None)
def basis_g(spec: GroupSpec, exact: bool = False) -> AlgebraBasis:
    """Bases are cached; AlgebraBasis instances are shared and must not be mutated."""
    if spec.family == SO:
        return so_basis(spec.n, exact=exact)
    if spec.family == SU:
        return su_basis(spec.n, exact=exact)
    if spec.family == SP:
        return sp_basis(spec.n, exact=exact)
    return u_embedded_basis(spec.n, exact=exact)


def algebra_dimension(spec: GroupSpec) -> int:
    n = spec.n
    if spec.family == SO:
        return n * (n - 1) // 2
    if spec.family == SU:
        return n * n - 1
    if spec.family == SP:
        return n * (2 * n + 1)
    return n * n  # embedded u(n)


# ---------------------------------------------------------------------------
# Cartan decompositions g = k + m
# ---------------------------------------------------------------------------


def _sun_son_m_basis(n: int) -> AlgebraBasis:
    els = [
        _i_times(generator("X", n, r, s), False)
        for r in range(1, n + 1)
        for s in range(r + 1, n + 1)
    ]
    els += [_i_times(_traceless_diagonal(n, t), False) for t in range(1, n)]
    return AlgebraBasis(f"m[su({n})/so({n})]", els)


def _spn_un_m_basis(n: int) -> AlgebraBasis:
    fams = _sp_families(n, exact=False)
    els = fams[1] + fams[2] + fams[4] + fams[6]
    return AlgebraBasis(f"m[sp({n})/u({n})]", els)


def _so2n_un_m_basis(n: int) -> AlgebraBasis:
    half = 1.0 / np.sqrt(2.0)
    els: List[CMatrix] = []
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            y = generator("Y", n, r, s)
            els.append(_scale(_two_block_diag(y, -y, False), half))
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            y = generator("Y", n, r, s)
            els.append(_scale(_two_block_off(y, y, False), half))
    return AlgebraBasis(f"m[so({2 * n})/u({n})]", els)


def _su2n_spn_m_basis(n: int) -> AlgebraBasis:
    """Blocks [[P, Q], [conj(Q), -conj(P)]] with P in su(n), Q complex skew."""
    half = 1.0 / np.sqrt(2.0)
    els: List[CMatrix] = []
    for u in su_basis(n).elements:
        p = u.to_complex()
        m = np.zeros((2 * n, 2 * n), dtype=complex)
        m[:n, :n] = p
        m[n:, n:] = -np.conj(p)
        els.append(CMatrix(m * half))
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            y = generator("Y", n, r, s).to_complex()
            for q in (y, 1j * y):
                m = np.zeros((2 * n, 2 * n), dtype=complex)
                m[:n, n:] = q
                m[n:, :n] = np.conj(q)
                els.append(CMatrix(m * half))
    return AlgebraBasis(f"m[su({2 * n})/sp({n})]", els)


@lru_cache(maxsize=None)
def cartan_decomposition(space: SymmetricSpaceSpec) -> Tuple[AlgebraBasis, AlgebraBasis]:
    """Orthonormal bases of k and of its orthogonal complement m inside g."""
    n = space.n
    if space.family == SUN_SON:
        return so_basis(n), _sun_son_m_basis(n)
    if space.family == SPN_UN:
        return u_embedded_basis(n), _spn_un_m_basis(n)
    if space.family == SO2N_UN:
        return u_embedded_basis(n), _so2n_un_m_basis(n)
    return sp_basis(n), _su2n_spn_m_basis(n)


# ---------------------------------------------------------------------------
# embeddings and sampling
# ---------------------------------------------------------------------------


def embed_unitary(z: np.ndarray) -> np.ndarray:
    """x + iy -> [[x, y], [-y, x]], the embedding of U(n) into SO(2n) and Sp(n)."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    x, y = np.real(z), np.imag(z)
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = x
    out[:n, n:] = y
    out[n:, :n] = -y
    out[n:, n:] = x
    return out


def sample_with_coefficients(
    spec: GroupSpec, rng: np.random.Generator, sigma: float = 0.5
) -> Tuple[CMatrix, np.ndarray]:
    """exp(sum_i c_i Z_i) with c_i ~ N(0, sigma^2); returns the point and its c."""
    if sigma <= 0:
        raise UsageError(f"sigma must be positive, got {sigma}")
    stack = basis_g(spec).stack()
    coeffs = rng.normal(0.0, sigma, size=len(stack))
    x = expm(np.tensordot(coeffs, stack, axes=1))
    return CMatrix(x), coeffs


def sample(spec: GroupSpec, rng: np.random.Generator, sigma: float = 0.5) -> CMatrix:
    return sample_with_coefficients(spec, rng, sigma)[0]


def rebuild_sample(spec: GroupSpec, coeffs: Sequence[float]) -> CMatrix:
    """Replay helper: reconstruct the exact same point from stored coefficients."""
    stack = basis_g(spec).stack()
    return CMatrix(expm(np.tensordot(np.asarray(coeffs, dtype=float), stack, axes=1)))


def sample_dual_with_coefficients(
    space: SymmetricSpaceSpec, rng: np.random.Generator, sigma: float = 0.2
) -> Tuple[CMatrix, np.ndarray, np.ndarray]:
    """A point exp(sum a_i K_i) exp(sum b_j iM_j) of the non-compact dual group."""
    if sigma <= 0:
        raise UsageError(f"sigma must be positive, got {sigma}")
    k_basis, m_basis = cartan_decomposition(space)
    ks, ms = k_basis.stack(), m_basis.stack()
    a = rng.normal(0.0, sigma, size=len(ks))
    b = rng.normal(0.0, sigma, size=len(ms))
    x = expm(np.tensordot(a, ks, axes=1)) @ expm(1j * np.tensordot(b, ms, axes=1))
    return CMatrix(x), a, b


def sample_dual(space: SymmetricSpaceSpec, rng: np.random.Generator, sigma: float = 0.2) -> CMatrix:
    return sample_dual_with_coefficients(space, rng, sigma)[0]


def rebuild_dual_sample(
    space: SymmetricSpaceSpec, a: Sequence[float], b: Sequence[float]
) -> CMatrix:
    k_basis, m_basis = cartan_decomposition(space)
    x = expm(np.tensordot(np.asarray(a, dtype=float), k_basis.stack(), axes=1)) @ expm(
        1j * np.tensordot(np.asarray(b, dtype=float), m_basis.stack(), axes=1)
    )
    return CMatrix(x)


def sample_subgroup(space: SymmetricSpaceSpec, rng: np.random.Generator, sigma: float = 0.5) -> CMatrix:
    """A random element of the embedded divisor group K."""
    return sample(space.subgroup_spec(), rng, sigma)


# ---------------------------------------------------------------------------
# membership diagnostics
# ---------------------------------------------------------------------------


@dataclass
class MembershipReport:
    spec: GroupSpec
    unitarity: float
    determinant: float
    symplectic: Optional[float] = None
    realness: Optional[float] = None
    embedding: Optional[float] = None

    @property
    def max_residual(self) -> float:
        vals = [self.unitarity, self.determinant]
        for v in (self.symplectic, self.realness, self.embedding):
            if v is not None:
                vals.append(v)
        return max(vals)

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_residual <= tol


def membership_check(spec: GroupSpec, x: CMatrix) -> MembershipReport:
    m = x.to_complex()
    size = spec.matrix_size
    if m.shape != (size, size):
        raise ShapeError(f"membership_check: expected {(size, size)}, got {m.shape}")
    eye = np.eye(size)
    unitarity = float(np.max(np.abs(m @ np.conj(m.T) - eye)))
    determinant = float(abs(np.linalg.det(m) - 1.0))
    report = MembershipReport(spec, unitarity, determinant)
    if spec.family == SO:
        report.realness = float(np.max(np.abs(np.imag(m))))
    if spec.family in (SP, U_IN_SPN, U_IN_SO2N):
        j = standard_symplectic(spec.n).to_complex()
        report.symplectic = float(np.max(np.abs(m @ j @ m.T - j)))
    if spec.family in (U_IN_SPN, U_IN_SO2N):
        n = spec.n
        block = max(
            float(np.max(np.abs(m[:n, :n] - m[n:, n:]))),
            float(np.max(np.abs(m[:n, n:] + m[n:, :n]))),
            float(np.max(np.abs(np.imag(m)))),
        )
        report.embedding = block
    return report
