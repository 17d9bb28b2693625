"""Exact symbolic layer: the algebra spanned by phi^a (log phi)^b.

Once phi satisfies tau(phi) = lambda phi and kappa(phi, phi) = mu phi^2,
the chain rule closes the span of phi^a (log phi)^b under tau:

    tau(phi^a L^b) = [lambda a + mu a(a-1)] phi^a L^b
                   + [lambda b + mu b(2a-1)] phi^a L^{b-1}
                   + mu b(b-1) phi^a L^{b-2},        L = log phi.

Everything here is exact rational-complex arithmetic, so "tau^p(S) is the
empty sum" is a genuine nullity certificate, not a small residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple, Union

import numpy as np

from .exact import RC_ZERO, RationalComplex
from .jets import JetScalar, jet_log, jet_pow

TermKey = Tuple[Fraction, int]  # (exponent of phi, exponent of log phi)


def _as_rc(x) -> RationalComplex:
    if isinstance(x, RationalComplex):
        return x
    return RationalComplex(Fraction(x))


class FormalSum:
    """Canonical linear combination of phi^a (log phi)^b terms.

    Zero coefficients are pruned immediately, so equality of sums is exact
    key-wise comparison and `is_zero` is a sound nullity test.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[TermKey, RationalComplex] = None):
        self.terms: Dict[TermKey, RationalComplex] = {}
        if terms:
            for (a, b), c in terms.items():
                self._accumulate(Fraction(a), int(b), _as_rc(c))

    def _accumulate(self, a: Fraction, b: int, coeff: RationalComplex):
        if b < 0:
            raise ValueError(f"log exponent must be >= 0, got {b}")
        key = (a, b)
        new = self.terms.get(key, RC_ZERO) + coeff
        if new.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    @staticmethod
    def term(coeff, a=0, b: int = 0) -> "FormalSum":
        return FormalSum({(Fraction(a), b): _as_rc(coeff)})

    @staticmethod
    def zero() -> "FormalSum":
        return FormalSum()

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(self.terms)
        for (a, b), c in other.terms.items():
            out._accumulate(a, b, c)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + other.scale(RationalComplex(-1))

    def scale(self, c) -> "FormalSum":
        c = _as_rc(c)
        if c.is_zero():
            return FormalSum()
        return FormalSum({key: coeff * c for key, coeff in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def a_support(self):
        return {a for (a, _) in self.terms}

    def max_b(self) -> int:
        return max((b for (_, b) in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]), reverse=True)

    def serialize(self) -> str:
        """Stable text form: "c * phi^(a) * log^b" joined by " + "."""
        if self.is_zero():
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            parts.append(f"{c!r} * phi^({a}) * log^{b}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FormalSum({self.serialize()})"


def tau_formal(s: FormalSum, lam: RationalComplex, mu: RationalComplex) -> FormalSum:
    """The action of tau on the formal algebra, extended linearly."""
    lam, mu = _as_rc(lam), _as_rc(mu)
    out = FormalSum()
    for (a, b), c in s.terms.items():
        a_rc = RationalComplex(a)
        keep = lam * a_rc + mu * a_rc * (a_rc - 1)
        out._accumulate(a, b, c * keep)
        if b >= 1:
            down1 = lam * b + mu * b * (2 * a_rc - 1)
            out._accumulate(a, b - 1, c * down1)
        if b >= 2:
            out._accumulate(a, b - 2, c * (mu * (b * (b - 1))))
    return out


def exponent_for(lam: RationalComplex, mu: RationalComplex) -> Fraction:
    """The rational exponent 1 - lambda/mu; rejects irrational or complex ratios."""
    ratio = _as_rc(lam) / _as_rc(mu)
    try:
        return Fraction(1) - ratio.as_fraction()
    except ValueError as exc:
        raise ValueError(f"eigenvalue ratio {ratio!r} is not a real rational") from exc


def build_phi_p(
    p: int,
    lam,
    mu,
    c1=1,
    c2=1,
) -> FormalSum:
    """The proper p-harmonic sum for an eigenfunction with eigenvalues (lam, mu):

      mu = 0, lam != 0:   c1 L^{p-1}
      mu != 0, lam = mu:  c1 L^{2p-1} + c2 L^{2p-2}
      mu != 0, lam != mu: c1 phi^{1-lam/mu} L^{p-1} + c2 L^{p-1}
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lam, mu = _as_rc(lam), _as_rc(mu)
    c1, c2 = _as_rc(c1), _as_rc(c2)
    if lam.is_zero() and mu.is_zero():
        raise ValueError("(lambda, mu) = (0, 0) does not define an eigenfunction")
    if mu.is_zero():
        return FormalSum.term(c1, 0, p - 1)
    if lam == mu:
        return FormalSum.term(c1, 0, 2 * p - 1) + FormalSum.term(c2, 0, 2 * p - 2)
    e = exponent_for(lam, mu)
    return FormalSum.term(c1, e, p - 1) + FormalSum.term(c2, 0, p - 1)


@dataclass
class PHarmonicCertificate:
    null_at_p: bool
    nonzero_at_p_minus_1: bool
    witness: FormalSum
    numeric_witness: float

    @property
    def proper(self) -> bool:
        return self.null_at_p and self.nonzero_at_p_minus_1


def verify_p_harmonic(s: FormalSum, lam, mu, p: int) -> PHarmonicCertificate:
    """Apply tau_formal p times exactly; certify tau^p S = 0 and tau^{p-1} S != 0.

    Along the way the structural closure facts are asserted: iterating tau
    never enlarges the phi-exponent support and never raises the log degree.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lam, mu = _as_rc(lam), _as_rc(mu)
    a0, b0 = s.a_support(), s.max_b()
    current = s
    iterates = [s]
    for _ in range(p):
        current = tau_formal(current, lam, mu)
        if not current.a_support() <= a0:
            raise AssertionError("tau iterate escaped the phi-exponent footprint")
        if current.max_b() > b0:
            raise AssertionError("tau iterate raised the log degree")
        iterates.append(current)
    witness = iterates[p - 1]
    numeric = 0.0
    for w in (2.0, 3.0, np.e):
        if not witness.is_zero():
            numeric = max(numeric, abs(evaluate_formal(witness, complex(w))))
    return PHarmonicCertificate(
        null_at_p=iterates[p].is_zero(),
        nonzero_at_p_minus_1=not witness.is_zero(),
        witness=witness,
        numeric_witness=numeric,
    )


def _principal_pow(w: complex, a: Fraction) -> complex:
    if a == 0:
        return 1.0 + 0.0j
    return complex(np.exp(float(a) * np.log(complex(w))))


def evaluate_formal(s: FormalSum, w: Union[complex, JetScalar]):
    """Numeric value of the sum at phi = w (complex scalar or jet)."""
    if isinstance(w, JetScalar):
        bad = np.any(np.asarray(w.value) == 0)
    else:
        w = complex(w)
        bad = w == 0
    if bad:
        raise ValueError("evaluate_formal: phi = 0 is outside the domain")
    if s.is_zero():
        return JetScalar(w.k, {}) if isinstance(w, JetScalar) else 0.0 + 0.0j
    if isinstance(w, JetScalar):
        log_w = jet_log(w)
        total = JetScalar(w.k, {})
        for (a, b), c in s.terms.items():
            term = jet_pow(w, a) if a != 0 else JetScalar.constant(1.0 + 0.0j, w.k)
            for _ in range(b):
                term = term * log_w
            total = total + term * complex(c)
        return total
    log_w = complex(np.log(w))
    total = 0.0 + 0.0j
    for (a, b), c in s.terms.items():
        total += complex(c) * _principal_pow(w, a) * log_w**b
    return total
