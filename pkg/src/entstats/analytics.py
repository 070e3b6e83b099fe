"""Closed-form purity cumulants, coupling sums, and asymptotic constants.

Every rational quantity is evaluated with exact integer binomials and
trinomials (as a ``Fraction``) and converted to float once, so equality
claims between closed forms can be tested exactly.  The Hadamard-family
variance formulas carry the multiplier c_q = 2 for q = 2 (real signed
phases admit twice the pairings) and c_q = 1 otherwise, including the
continuous-phase limit, which is addressed as ``q = Q_INF``.

The closed sums f2, f2star and h2 are written in their trinomial-bracket
form; the brute-force companions ``*_bruteforce`` sum the squared
coupling weights over index pairs directly, through an algebraically
different expression, and act as oracles for the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bitcomb import binom, trinom
from .purity import coupling_g

__all__ = [
    "Q_INF",
    "TheoryValue",
    "asymptotics_table",
    "c_q",
    "f2_bruteforce",
    "f2_by_distance",
    "f2_sum",
    "f2star_bruteforce",
    "f2star_sum",
    "h2_bruteforce",
    "h2_by_distance",
    "h2_sum",
    "k_distance",
    "mu_a_haar",
    "mu_a_hadamard",
    "mu_me_haar",
    "mu_me_hadamard",
    "sigma2_a_haar",
    "sigma2_a_hadamard",
    "sigma2_me_haar",
    "sigma2_me_hadamard",
]

#: Distinguished value for the continuous-phase (q -> infinity) ensemble.
Q_INF = math.inf

BRUTEFORCE_MAX_N = 10


@dataclass(frozen=True)
class TheoryValue:
    """A named closed-form quantity, with its exact rational form if any."""

    name: str
    n: int
    value: float
    n_a: int | None = None
    q: int | float | None = None
    exact: Fraction | None = None

    @property
    def exact_num(self) -> int | None:
        return None if self.exact is None else self.exact.numerator

    @property
    def exact_den(self) -> int | None:
        return None if self.exact is None else self.exact.denominator

    @staticmethod
    def rational(name: str, n: int, exact: Fraction, **kw) -> "TheoryValue":
        return TheoryValue(name, n, float(exact), exact=exact, **kw)


def c_q(q: int | float) -> int:
    """Variance multiplier of the flat-modulus ensembles: 2 for q=2 else 1."""
    if q != Q_INF and (int(q) != q or q < 2):
        raise ValueError(f"q must be an integer >= 2 or Q_INF, got {q}")
    return 2 if q == 2 else 1


def _check_split(n: int, n_a: int) -> None:
    if not 1 <= n_a <= n - n_a:
        raise ValueError(f"need 1 <= n_a <= n - n_a, got n={n}, n_a={n_a}")


def _halves(n: int) -> tuple[int, int]:
    return n // 2, (n + 1) // 2


# ---------------------------------------------------------------------------
# Haar ensemble


def mu_a_haar(n: int, n_a: int) -> TheoryValue:
    """Mean fixed-bipartition purity of the uniform-sphere ensemble."""
    _check_split(n, n_a)
    exact = Fraction(2**n_a + 2 ** (n - n_a), 2**n + 1)
    return TheoryValue.rational("mu_A_haar", n, exact, n_a=n_a)


def sigma2_a_haar(n: int, n_a: int) -> TheoryValue:
    """Variance of the fixed-bipartition purity under the Haar measure."""
    _check_split(n, n_a)
    exact = Fraction(
        2 * (2 ** (2 * n_a) - 1) * (2 ** (2 * (n - n_a)) - 1),
        (2**n + 1) ** 2 * (2**n + 2) * (2**n + 3),
    )
    return TheoryValue.rational("sigma2_A_haar", n, exact, n_a=n_a)


def mu_me_haar(n: int) -> TheoryValue:
    """Mean balanced-average purity; equals the balanced mu_A_haar."""
    lo, hi = _halves(n)
    exact = Fraction(2**lo + 2**hi, 2**n + 1)
    return TheoryValue.rational("mu_ME_haar", n, exact)


def sigma2_me_haar(n: int) -> TheoryValue:
    """Variance of the balanced-average purity under the Haar measure."""
    lo, hi = _halves(n)
    f2 = f2_sum(n).exact
    exact = Fraction(
        (2**n + 1) * f2 - 2 * (2**lo + 2**hi) ** 2,
        (2**n + 1) ** 2 * (2**n + 2) * (2**n + 3),
    )
    return TheoryValue.rational("sigma2_ME_haar", n, exact)


# ---------------------------------------------------------------------------
# coupling sums


def f2_sum(n: int) -> TheoryValue:
    """Sum of squared coupling weights over all index pairs (times 4).

    Closed trinomial form: sum over occupation numbers s, t of
    [C(lo,s) C(hi,t) + C(lo,t) C(hi,s)]^2 / C(n; s, t).
    """
    lo, hi = _halves(n)
    total = Fraction(0)
    for s in range(hi + 1):
        for t in range(hi + 1):
            bracket = binom(lo, s) * binom(hi, t) + binom(lo, t) * binom(hi, s)
            if bracket:
                total += Fraction(bracket * bracket, trinom(n, s, t))
    return TheoryValue.rational("f2", n, total)


def f2star_sum(n: int) -> TheoryValue:
    """Same as f2 but excluding the zero index on both slots (s, t >= 1)."""
    lo, hi = _halves(n)
    total = Fraction(0)
    for s in range(1, hi + 1):
        for t in range(1, hi + 1):
            bracket = binom(lo, s) * binom(hi, t) + binom(lo, t) * binom(hi, s)
            if bracket:
                total += Fraction(bracket * bracket, trinom(n, s, t))
    return TheoryValue.rational("f2star", n, total)


def h2_sum(n: int) -> TheoryValue:
    """The t=0 slice of f2: sum_s [C(lo,s) + C(hi,s)]^2 / C(n,s)."""
    lo, hi = _halves(n)
    total = Fraction(0)
    for s in range(hi + 1):
        bracket = binom(lo, s) + binom(hi, s)
        if bracket:
            total += Fraction(bracket * bracket, binom(n, s))
    return TheoryValue.rational("h2", n, total)


def f2_bruteforce(n: int) -> float:
    """Oracle for f2: 4 sum over index pairs of the squared coupling."""
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force is O(4^n); capped at n <= {BRUTEFORCE_MAX_N}")
    dim = 1 << n
    total = 0.0
    for l in range(dim):
        for m in range(dim):
            g = coupling_g(l, m, n)
            if g:
                total += g * g
    return 4.0 * total


def f2star_bruteforce(n: int) -> float:
    """Oracle for f2star: both indices restricted to be nonzero."""
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force is O(4^n); capped at n <= {BRUTEFORCE_MAX_N}")
    dim = 1 << n
    total = 0.0
    for l in range(1, dim):
        for m in range(1, dim):
            g = coupling_g(l, m, n)
            if g:
                total += g * g
    return 4.0 * total


def h2_bruteforce(n: int) -> float:
    """Oracle for h2: 4 sum_l of the squared coupling against index 0."""
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force is O(4^n); capped at n <= {BRUTEFORCE_MAX_N}")
    total = 0.0
    for l in range(1 << n):
        g = coupling_g(l, 0, n)
        total += g * g
    return 4.0 * total


def f2_by_distance(n: int) -> TheoryValue:
    """f2 re-expressed as a sum over the overlap distance d of two splits.

    Must agree with :func:`f2_sum`; evaluated in floats because odd n
    brings in powers of sqrt(2).
    """
    lo, hi = _halves(n)
    total = 0.0
    for d in range(lo + 1):
        total += (
            binom(lo, d)
            * binom(hi, d)
            * 2.0 ** (n / 2 + 1)
            * (2.0 ** (n / 2 - 2 * d) + 2.0 ** -(n / 2 - 2 * d))
        )
    return TheoryValue("f2_by_distance", n, total / binom(n, lo))


def h2_by_distance(n: int) -> TheoryValue:
    """Distance-indexed companion of :func:`h2_sum`."""
    lo, hi = _halves(n)
    total = 0.0
    for d in range(lo + 1):
        total += binom(lo, d) * binom(hi, d) * ((2**lo + 2**hi) * 2.0**-d + 2.0 ** (d + 1))
    return TheoryValue("h2_by_distance", n, total / binom(n, lo))


# ---------------------------------------------------------------------------
# flat-modulus (Hadamard/butson) ensembles


def mu_a_hadamard(n: int, n_a: int) -> TheoryValue:
    """Mean fixed-bipartition purity of any flat-modulus phase ensemble."""
    _check_split(n, n_a)
    exact = Fraction(2**n_a + 2 ** (n - n_a) - 1, 2**n)
    return TheoryValue.rational("mu_A_hadamard", n, exact, n_a=n_a)


def sigma2_a_hadamard(n: int, n_a: int, q: int | float) -> TheoryValue:
    """Fixed-bipartition purity variance of the q-phase ensemble."""
    _check_split(n, n_a)
    exact = Fraction(2 * c_q(q) * (2**n_a - 1) * (2 ** (n - n_a) - 1), 2 ** (3 * n))
    return TheoryValue.rational("sigma2_A_hadamard", n, exact, n_a=n_a, q=q)


def mu_me_hadamard(n: int) -> TheoryValue:
    """Mean balanced-average purity of any flat-modulus phase ensemble."""
    lo, hi = _halves(n)
    exact = Fraction(2**lo + 2**hi - 1, 2**n)
    return TheoryValue.rational("mu_ME_hadamard", n, exact)


def sigma2_me_hadamard(n: int, q: int | float) -> TheoryValue:
    """Balanced-average purity variance: c_q f2star(n) / 2^(3n)."""
    exact = c_q(q) * f2star_sum(n).exact / 2 ** (3 * n)
    return TheoryValue.rational("sigma2_ME_hadamard", n, exact, q=q)


def k_distance(n: int, q: int | float) -> TheoryValue:
    """How many ensemble standard deviations separate the mean
    balanced-average purity from its theoretical minimum 2^(-floor(n/2))."""
    lo, _ = _halves(n)
    value = (2**lo - 1) * 2.0 ** (n / 2) / math.sqrt(c_q(q) * float(f2star_sum(n).exact))
    return TheoryValue("k_distance", n, value, q=q)


# ---------------------------------------------------------------------------
# large-system reference values

#: Growth exponent of f2: f2(n) ~ 3 sqrt(2) 2^(alpha n).
ALPHA = math.log2(3 / 2)

#: Growth exponent of h2: h2(n) ~ 2^(1/4) (2 + sqrt(2)) 2^(gamma n) (even n).
GAMMA = math.log2((1 + math.sqrt(2)) / 2)

#: Extra factor the h2 asymptote picks up for odd n.
H2_ODD_FACTOR = (4 + 3 * math.sqrt(2)) / 8


def h2_asymptote(n: int) -> float:
    """Saddle-point approximation of h2(n)."""
    value = 2 ** 0.25 * (2 + math.sqrt(2)) * ((1 + math.sqrt(2)) / 2) ** n
    return value * H2_ODD_FACTOR if n % 2 else value


def sigma2_me_asymptote(n: int, q: int | float = Q_INF) -> float:
    """Leading large-n behavior of the balanced-average purity variance."""
    return 3 * math.sqrt(2) * c_q(q) * (3 / 16) ** n


def asymptotics_table(n_max: int) -> list[TheoryValue]:
    """Constants and per-n scaling diagnostics of the large-system limit.

    Emits alpha and gamma, the exact mean gap
    delta_mu_ME = mu_ME_haar - mu_ME_hadamard, the ratio of the ensemble
    standard deviation to that gap, and the variance reference curves
    3 sqrt(2) c_q (3/16)^n.
    """
    rows = [
        TheoryValue("alpha", 0, ALPHA),
        TheoryValue("gamma", 0, GAMMA),
    ]
    for n in range(2, n_max + 1):
        delta = mu_me_haar(n).exact - mu_me_hadamard(n).exact
        rows.append(TheoryValue.rational("delta_mu_ME", n, delta))
        for name, var in (
            ("sigma_over_delta_mu_haar", sigma2_me_haar(n).value),
            ("sigma_over_delta_mu_hypergraph", sigma2_me_hadamard(n, 2).value),
            ("sigma_over_delta_mu_hadamard", sigma2_me_hadamard(n, Q_INF).value),
        ):
            rows.append(TheoryValue(name, n, math.sqrt(var) / float(delta)))
        rows.append(TheoryValue("asym_sigma2_ME", n, sigma2_me_asymptote(n), q=Q_INF))
        rows.append(TheoryValue("asym_sigma2_ME_hypergraph", n, sigma2_me_asymptote(n, 2), q=2))
    return rows
