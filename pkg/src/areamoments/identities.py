"""Direct-sum checks of the combinatorial identities behind the moment formula.

Each ``check_*`` evaluates the left side by summing over its index set and
the right side from the closed form, and compares them as exact rationals.
Reciprocal factorials of negative integers are taken to be zero.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

from .exactmath import factorial, inv_factorial
from .moment_engine import compositions
from .walk_oracle import SizeError

DIRECT_SUM_MAX_N = 10
DIRECT_SUM_MAX_K = 8


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    parameter_point: tuple
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_json_obj(self) -> dict:
        d = asdict(self)
        return {
            "name": d["identity_name"],
            "params": list(d["parameter_point"]),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "pass": self.passed,
        }


def _guard(k: int, n: int) -> None:
    if k > DIRECT_SUM_MAX_K or n > DIRECT_SUM_MAX_N:
        raise SizeError(f"direct sum limited to k <= {DIRECT_SUM_MAX_K}, n <= {DIRECT_SUM_MAX_N}")


def check_comb1(k: int, a: Iterable[int], B: int) -> IdentityReport:
    """sum_{b_0+...+b_k=B} prod (a_i+b_i)!/b_i!  ==  prod a_i! (A+B+k)!/(B!(A+k)!)."""
    a = tuple(a)
    if len(a) != k + 1:
        raise ValueError(f"need k+1 = {k + 1} values of a, got {len(a)}")
    lhs = 0
    for b in compositions(B, k + 1):
        term = 1
        for ai, bi in zip(a, b):
            term *= factorial(ai + bi) // factorial(bi)
        lhs += term
    A = sum(a)
    rhs = Fraction(factorial(A + B + k), factorial(B) * factorial(A + k))
    for ai in a:
        rhs *= factorial(ai)
    return IdentityReport("comb1", (k, *a, B), Fraction(lhs), rhs)


def _pair_sum(k: int, n1: int, weight) -> int:
    # sum over alpha, beta compositions of n1 into k+1 parts, by brute enumeration
    alphas = list(compositions(n1, k + 1))
    total = 0
    for alpha in alphas:
        for beta in alphas:
            term = 1
            for x, y in zip(alpha, beta):
                term *= comb(x + y, x)
            total += term * weight(alpha, beta)
    return total


def check_comb2(k: int, n1: int) -> IdentityReport:
    """sum prod (alpha_i+beta_i)!/(alpha_i! beta_i!) == (2 n1 + k)!/(k! n1!^2)."""
    if k < 0 or n1 < 0:
        raise ValueError("k and n1 must be nonnegative")
    _guard(k, n1)
    lhs = _pair_sum(k, n1, lambda al, be: 1)
    rhs = Fraction(factorial(2 * n1 + k), factorial(k) * factorial(n1) ** 2)
    return IdentityReport("comb2", (k, n1), Fraction(lhs), rhs)


def _comb3_summand(n2: int, n_minus: int, n_zero: int, n_plus: int) -> Fraction:
    if n_plus > n2 or n_minus > n2:
        return Fraction(0)
    return (
        (-1) ** n_zero
        * factorial(2 * n2 - n_plus - n_minus)
        * inv_factorial(n2 - n_plus)
        * inv_factorial(n2 - n_minus)
    )


def comb3_raw(k: int, n2: int) -> Fraction:
    """sum over eps in {-1,0,1}^k of (-1)^{n0} (2n2-n+-n-)!/((n2-n+)!(n2-n-)!)."""
    total = Fraction(0)
    for eps in itertools.product((-1, 0, 1), repeat=k):
        total += _comb3_summand(n2, eps.count(-1), eps.count(0), eps.count(1))
    return total


def comb3_regrouped_terms(k: int, n2: int) -> dict[int, tuple[Fraction, Fraction]]:
    """Per n0: (raw eps-sum restricted to that n0, the regrouped closed form).

    The regrouped form is k!/n0! (-1)^{n0} (2n2+n0-k)!/n2!^2 times
    (2n2)!/((k-n0)!(2n2+n0-k)!), i.e. (-1)^{n0} binom(k, n0) (2n2)!/n2!^2.
    """
    raw: dict[int, Fraction] = {n0: Fraction(0) for n0 in range(k + 1)}
    for eps in itertools.product((-1, 0, 1), repeat=k):
        n0 = eps.count(0)
        raw[n0] += _comb3_summand(n2, eps.count(-1), n0, eps.count(1))
    out = {}
    for n0 in range(k + 1):
        m = 2 * n2 + n0 - k
        if m < 0:
            # every (n+, n-) pair has n+ + n- = k - n0 > 2 n2, so one exceeds n2
            closed = Fraction(0)
        else:
            closed = (
                Fraction(factorial(k), factorial(n0)) * (-1) ** n0
                * Fraction(factorial(m), factorial(n2) ** 2)
                * Fraction(factorial(2 * n2), factorial(k - n0) * factorial(m))
            )
        out[n0] = (raw[n0], closed)
    return out


def check_comb3(k: int, n2: int) -> IdentityReport:
    """The signed increment sum vanishes for every k >= 1 with 2 n2 >= k.

    Outside that range (fewer vertical steps than insertions) the prefactor
    n2!^2/(k!(2n2-k)!) is undefined and the bare sum does not vanish: the
    zero-reciprocal convention leaves a truncated alternating binomial sum.
    """
    if k < 1 or n2 < 0:
        raise ValueError("need k >= 1 and n2 >= 0")
    if 2 * n2 < k:
        raise ValueError(f"identity holds only for 2*n2 >= k, got k={k}, n2={n2}")
    _guard(k, n2)
    return IdentityReport("comb3", (k, n2), comb3_raw(k, n2), Fraction(0))


def check_comb4(k: int, n1: int, i: int | None = None) -> IdentityReport:
    """sum ... (alpha_i - beta_i)^2 == 2 k n1/(k+2)! (2n1+k)!/n1!^2, any 1 <= i <= k."""
    if k < 1 or n1 < 0:
        raise ValueError("need k >= 1 and n1 >= 0")
    _guard(k, n1)
    i = k if i is None else i
    if not 1 <= i <= k:
        raise ValueError(f"index {i} outside 1..{k}")
    lhs = _pair_sum(k, n1, lambda al, be: (al[i] - be[i]) ** 2)
    rhs = Fraction(2 * k * n1 * factorial(2 * n1 + k), factorial(k + 2) * factorial(n1) ** 2)
    return IdentityReport("comb4", (k, n1), Fraction(lhs), rhs)


def check_comb5(k: int, n1: int, i: int | None = None, j: int | None = None) -> IdentityReport:
    """sum ... (alpha_i - beta_i)(alpha_j - beta_j) == -2 n1/(k+2)! (2n1+k)!/n1!^2, i != j."""
    if k < 2 or n1 < 0:
        raise ValueError("need k >= 2 and n1 >= 0")
    _guard(k, n1)
    i = k - 1 if i is None else i
    j = k if j is None else j
    if i == j or not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"need distinct indices in 1..{k}, got {i}, {j}")
    lhs = _pair_sum(k, n1, lambda al, be: (al[i] - be[i]) * (al[j] - be[j]))
    rhs = Fraction(-2 * n1 * factorial(2 * n1 + k), factorial(k + 2) * factorial(n1) ** 2)
    return IdentityReport("comb5", (k, n1), Fraction(lhs), rhs)


def run_sweep(max_k: int = 5, max_n: int = 6) -> list[IdentityReport]:
    """Every identity over a grid of small parameters.  Negative bounds give []."""
    if max_k < 0 or max_n < 0:
        return []
    reports: list[IdentityReport] = []
    for k in range(max_k + 1):
        for B in range(max_n + 1):
            for a in _comb1_vectors(k, max_n):
                reports.append(check_comb1(k, a, B))
    for k in range(max_k + 1):
        for n in range(max_n + 1):
            reports.append(check_comb2(k, n))
    for k in range(1, max_k + 1):
        # k <= 2 n2 < 2k still exercises the zero-reciprocal convention
        for n in range((k + 1) // 2, max_n + 1):
            reports.append(check_comb3(k, n))
    for k in range(1, max_k + 1):
        for n in range(max_n + 1):
            reports.append(check_comb4(k, n))
    for k in range(2, max_k + 1):
        for n in range(max_n + 1):
            reports.append(check_comb5(k, n))
    return reports


def _comb1_vectors(k: int, max_n: int) -> list[tuple[int, ...]]:
    # a handful of deterministic a-vectors per k
    top = max(max_n, 1)
    vecs = {
        (0,) * (k + 1),
        tuple((i % 3) for i in range(k + 1)),
        tuple(min(i + 1, top) for i in range(k + 1)),
    }
    return sorted(vecs)
