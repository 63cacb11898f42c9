"""Symbolic computation of the area-moment polynomials P_{2l}(n1, n2).

The even moments of the algebraic area over closed walks with n1 horizontal
and n2 vertical steps each way factor as

    sum_gamma Area(gamma)^{2l} = cardinal(n1, n2) * P_{2l}(n1, n2)

with P_{2l} a symmetric polynomial of degree 2l.  The construction here
expands the magnetic-flux insertions order by order: for each number k of
insertions and each composition (l_1, ..., l_k) of 2l,

    P_{2l} = sum_k sum_{l_1+...+l_k = 2l} (2l)!/(l_1!...l_k!) P_l(n1) Q_l(n2)

where the n1 factor comes from the polynomials A_n(x, y) of a generating
function and the n2 factor from a signed sum over increments
eps_i in {-1, 0, +1} with partial sums sigma_i.

Compositions are *weak*: parts may be zero.  A zero part still shifts the
later partial sums, so dropping it changes the answer (P_2 would come out as
n1*n2 instead of n1*n2/3).  Only a zero *last* part is guaranteed to
contribute nothing.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .exactmath import (
    BiPoly,
    factorial,
    falling_factorial_poly,
    multinomial,
    poly_diffop,
)
from .walk_oracle import SizeError, cardinal

log = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1
C_DIRECT_MAX_N1 = 8


class InvariantError(AssertionError):
    """A computed moment polynomial violates a structural invariant."""


@dataclass(frozen=True)
class Composition:
    """Ordered parts (l_1, ..., l_k), each >= 0, summing to 2l."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise ValueError("a composition needs at least one part")
        if any(p < 0 for p in parts):
            raise ValueError(f"parts must be nonnegative: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def class_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.parts, reverse=True))


@dataclass(frozen=True)
class EpsilonSeq:
    eps: tuple[int, ...]

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.eps))

    @property
    def counts(self) -> tuple[int, int, int]:
        """(n_minus, n_zero, n_plus)."""
        return self.eps.count(-1), self.eps.count(0), self.eps.count(1)


@dataclass(frozen=True)
class MomentPolynomial:
    order: int
    poly: BiPoly

    def __call__(self, n1, n2) -> Fraction:
        return self.poly.evaluate(n1, n2)


def compositions(total: int, k: int, min_part: int = 0) -> Iterator[tuple[int, ...]]:
    """Ordered k-tuples of integers >= min_part summing to ``total``, in lex order."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(min_part, total - min_part * (k - 1) + 1):
        for rest in compositions(total - first, k - 1, min_part):
            yield (first,) + rest


def partitions(total: int, max_parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``max_parts`` positive parts, descending."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


# -- n1 side -------------------------------------------------------------------


@lru_cache(maxsize=None)
def a_poly(n: int) -> BiPoly:
    """A_n(x, y): A_0 = 1, A_{n+1} = [(n+1)(x-y) + (1-x-y)(x d_x - y d_y)] A_n."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return BiPoly.constant(1)
    prev = a_poly(n - 1)
    x_minus_y = BiPoly({(1, 0): 1, (0, 1): -1})
    one_minus = BiPoly({(0, 0): 1, (1, 0): -1, (0, 1): -1})
    return x_minus_y * prev * n + one_minus * poly_diffop(prev)


def product_coeffs(c: Composition) -> dict[tuple[int, int], Fraction]:
    """Coefficients A_{mn} of prod_i A_{l_i}(x, y)."""
    prod = BiPoly.constant(1)
    for part in c.class_key:
        if part:
            prod = prod * a_poly(part)
    return prod.terms()


@lru_cache(maxsize=None)
def _doubled_rising(offset: int, depth: int) -> BiPoly:
    # prod_{j=1..depth} (2 n1 + offset + j) as a polynomial in n1
    out = BiPoly.constant(1)
    for j in range(1, depth + 1):
        out = out * BiPoly({(1, 0): 2, (0, 0): offset + j})
    return out


@lru_cache(maxsize=None)
def _ff1(m: int) -> BiPoly:
    return falling_factorial_poly(1, m)


@lru_cache(maxsize=None)
def _p_poly_by_class(k: int, class_key: tuple[int, ...]) -> BiPoly:
    two_l = sum(class_key)
    total = BiPoly()
    for (m, n), a_mn in product_coeffs(Composition(class_key)).items():
        total = total + _ff1(m) * _ff1(n) * _doubled_rising(k, two_l - m - n) * a_mn
    return total / factorial(k + two_l)


def p_poly(c: Composition) -> BiPoly:
    """P^{(k)}_{l_1...l_k}(n1) = n1!^2/(2 n1 + k)! * C_{l_1...l_k}(n1), as a polynomial in n1.

    Depends on the parts only through their multiset, so it is cached per
    permutation class.
    """
    return _p_poly_by_class(c.k, c.class_key)


def compute_C_direct(c: Composition, n1: int) -> int:
    """Direct sum over (alpha_0..alpha_k), (beta_0..beta_k), each summing to n1, of
    prod_i (alpha_i+beta_i)!/(alpha_i! beta_i!) * prod_{i>=1} (alpha_i - beta_i)^{l_i}.

    The sum factorizes position by position, so it is accumulated as a
    convolution over (running alpha total, running beta total).  No
    generating function is involved.
    """
    if n1 < 0:
        raise ValueError(f"n1 must be nonnegative, got {n1}")
    if n1 > C_DIRECT_MAX_N1:
        raise SizeError(f"direct C sum limited to n1 <= {C_DIRECT_MAX_N1}, got {n1}")
    from math import comb

    exponents = (0,) + c.parts
    table = {(0, 0): 1}
    for e in exponents:
        nxt: dict[tuple[int, int], int] = {}
        for (sa, sb), acc in table.items():
            for a in range(n1 - sa + 1):
                for b in range(n1 - sb + 1):
                    w = comb(a + b, a) * (a - b) ** e
                    if w:
                        key = (sa + a, sb + b)
                        nxt[key] = nxt.get(key, 0) + acc * w
        table = nxt
    return table.get((n1, n1), 0)


# -- n2 side -------------------------------------------------------------------


def _ul_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _ul_add_into(acc: list[int], p: list[int], scale: int) -> None:
    if len(acc) < len(p):
        acc.extend([0] * (len(p) - len(acc)))
    for i, c in enumerate(p):
        acc[i] += scale * c


@lru_cache(maxsize=None)
def _ff_ints(m: int) -> tuple[int, ...]:
    out = [1]
    for j in range(m):
        out = _ul_mul(out, [-j, 1])
    return tuple(out)


@lru_cache(maxsize=None)
def _shifted_rising_ints(k: int, depth: int) -> tuple[int, ...]:
    # prod_{j=1..depth} (2 n2 - k + j)
    out = [1]
    for j in range(1, depth + 1):
        out = _ul_mul(out, [j - k, 2])
    return tuple(out)


@lru_cache(maxsize=None)
def _eps_weight(k: int, n_plus: int, n_minus: int) -> tuple[int, ...]:
    """(-1)^{n0} n2!/(n2-n+)! n2!/(n2-n-)! (2n2-k+n0)!/(2n2-k)! as integer coefficients."""
    n_zero = k - n_plus - n_minus
    poly = _ul_mul(_ul_mul(list(_ff_ints(n_plus)), list(_ff_ints(n_minus))),
                   list(_shifted_rising_ints(k, n_zero)))
    if n_zero % 2:
        poly = [-c for c in poly]
    return tuple(poly)


def _n2_poly(coeffs: list[int]) -> BiPoly:
    return BiPoly.from_univariate(coeffs, var_index=2)


def q_poly(c: Composition) -> BiPoly:
    """Q^{(k)}_{l_1...l_k}(n2) by the plain sum over all 3^k increment sequences."""
    k = c.k
    acc: list[int] = [0]
    for eps in itertools.product((-1, 0, 1), repeat=k):
        sigma = 0
        w = 1
        for e, l in zip(eps, c.parts):
            sigma += e
            w *= sigma**l
            if not w:
                break
        if w:
            _ul_add_into(acc, list(_eps_weight(k, eps.count(1), eps.count(-1))), w)
    return _n2_poly(acc)


@lru_cache(maxsize=None)
def _s_poly_reduced(k: int, k_even: int, k_odd: int) -> BiPoly:
    if k_odd % 2:
        return BiPoly()
    p = k_odd // 2
    lead = (-1) ** p * factorial(2 * p) // factorial(p)
    coeffs = _ul_mul(list(_shifted_rising_ints(k, k_even)), list(_ff_ints(p)))
    return _n2_poly([lead * x for x in coeffs])


def s_poly(lambdas: tuple[int, ...] | list[int], k: int | None = None) -> BiPoly:
    """S^{(k)}_{lambda_1...lambda_k}(n2) in closed form.

    Zero if any exponent is zero.  Otherwise each even exponent contributes a
    factor (2 n2 - k + j), and the k_o odd ones give (-1)^p (2p)!/p! * n2!/(n2-p)!
    when k_o = 2p, or zero when k_o is odd.
    """
    lambdas = tuple(lambdas)
    if k is None:
        k = len(lambdas)
    if len(lambdas) != k:
        raise ValueError(f"need exactly k={k} exponents, got {len(lambdas)}")
    if any(lam < 0 for lam in lambdas):
        raise ValueError(f"exponents must be nonnegative: {lambdas}")
    if any(lam == 0 for lam in lambdas):
        return BiPoly()
    k_even = sum(1 for lam in lambdas if lam % 2 == 0)
    return _s_poly_reduced(k, k_even, k - k_even)


def _sigma_monomials(parts: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    # expand prod_i (eps_1 + ... + eps_i)^{l_i} into eps-monomials
    k = len(parts)
    poly: dict[tuple[int, ...], int] = {(0,) * k: 1}
    for i, l in enumerate(parts):
        for _ in range(l):
            nxt: dict[tuple[int, ...], int] = {}
            for mono, coeff in poly.items():
                for j in range(i + 1):
                    m = list(mono)
                    m[j] += 1
                    key = tuple(m)
                    nxt[key] = nxt.get(key, 0) + coeff
            poly = nxt
    return poly


def q_poly_fast(c: Composition) -> BiPoly:
    """Q through the eps-monomial expansion and the closed form of S."""
    total = BiPoly()
    for lambdas, mult in _sigma_monomials(c.parts).items():
        if 0 in lambdas:
            continue
        total = total + s_poly(lambdas, c.k) * mult
    return total


def class_q_sums(two_l: int, k: int) -> dict[tuple[int, ...], list[int]]:
    """For every permutation class of weak k-compositions of 2l, the sum of Q over
    the class members, as integer coefficients in n2.

    Classes are keyed by their positive parts in descending order.  The sum
    over members sits inside the increment sum: a DP over positions carries
    (n_plus, n_minus, multiset of exponents placed so far), and each position
    picks an increment and then an exponent e with weight sigma^e.  Every
    distinct arrangement of a multiset is generated exactly once.
    """
    join: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}

    def grow(mu: tuple[int, ...], e: int) -> tuple[int, ...]:
        key = (mu, e)
        got = join.get(key)
        if got is None:
            got = join[key] = tuple(sorted(mu + (e,), reverse=True))
        return got

    # state: (n_plus, n_minus, used, mu) -> integer weight
    layer: dict[tuple[int, int, int, tuple[int, ...]], int] = {(0, 0, 0, ()): 1}
    for pos in range(k):
        last = pos == k - 1
        nxt: dict[tuple[int, int, int, tuple[int, ...]], int] = {}
        for (a, b, used, mu), w in layer.items():
            room = two_l - used
            for da, db in ((1, 0), (0, 1), (0, 0)):
                na, nb = a + da, b + db
                s = na - nb
                if not last or room == 0:
                    key = (na, nb, used, mu)
                    nxt[key] = nxt.get(key, 0) + w
                if s == 0 or room == 0:
                    continue
                lo = room if last else 1
                pw = w * s ** (lo - 1)
                for e in range(lo, room + 1):
                    pw *= s
                    key = (na, nb, used + e, grow(mu, e))
                    nxt[key] = nxt.get(key, 0) + pw
        layer = nxt

    out: dict[tuple[int, ...], list[int]] = {}
    for (a, b, used, mu), w in sorted(layer.items()):
        if used != two_l or not w:
            continue
        acc = out.setdefault(mu, [0])
        _ul_add_into(acc, list(_eps_weight(k, a, b)), w)
    return out


def _moment_terms_for_k(two_l: int, k: int) -> BiPoly:
    total = BiPoly()
    for mu, q_coeffs in class_q_sums(two_l, k).items():
        if not any(q_coeffs):
            continue
        parts = mu + (0,) * (k - len(mu))
        p = p_poly(Composition(parts))
        total = total + p * _n2_poly(q_coeffs) * multinomial(mu)
    return total


def moment_polynomial(two_l: int, workers: int | None = None, check: bool = True) -> MomentPolynomial:
    """P_{2l}(n1, n2) exactly.

    ``workers`` > 1 spreads the k-sweep over processes; the reduction is in
    fixed k order, so the result does not depend on scheduling.
    """
    if two_l < 0 or two_l % 2:
        raise ValueError(f"moment order must be even and nonnegative, got {two_l}")
    if two_l == 0:
        result = MomentPolynomial(0, BiPoly.constant(1))
    else:
        ks = list(range(1, two_l + 1))
        if workers and workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pieces = list(pool.map(_moment_terms_for_k, [two_l] * len(ks), ks))
        else:
            pieces = [_moment_terms_for_k(two_l, k) for k in ks]
        poly = BiPoly()
        for piece in pieces:
            poly = poly + piece
        result = MomentPolynomial(two_l, poly)
    if check:
        check_moment_invariants(result)
    return result


def moment_polynomial_by_compositions(two_l: int) -> BiPoly:
    """Unoptimized reference: every weak composition separately, Q by the 3^k sum.

    Practical only for small orders; used to cross-check the grouped path.
    """
    total = BiPoly()
    for k in range(1, two_l + 1):
        for parts in compositions(two_l, k):
            if parts[-1] == 0:
                continue
            c = Composition(parts)
            total = total + p_poly(c) * q_poly(c) * multinomial(parts)
    return total


def check_moment_invariants(mp: MomentPolynomial) -> None:
    """Raise InvariantError unless ``mp`` has every structural property expected."""
    p, two_l = mp.poly, mp.order
    problems = []
    if two_l == 0:
        if p != BiPoly.constant(1):
            problems.append("zeroth moment polynomial must be 1")
    else:
        half = two_l // 2
        if not p.is_symmetric():
            problems.append("not symmetric under n1 <-> n2")
        if p.degree() != two_l:
            problems.append(f"total degree {p.degree()} != {two_l}")
        if p.degree_in(1) > half or p.degree_in(2) > half:
            problems.append(f"single-variable degree exceeds {half}")
        if not p.restrict(2, 0).is_zero() or not p.restrict(1, 0).is_zero():
            problems.append("does not vanish when n1 = 0 or n2 = 0")
        if p.evaluate(1, 1) != Fraction(1, 3):
            problems.append(f"value at (1, 1) is {p.evaluate(1, 1)}, expected 1/3")
    if problems:
        raise InvariantError(f"P_{two_l}: " + "; ".join(problems))


# -- sums over n1 + n2 = n -----------------------------------------------------


def mingo_nica_sum(two_l: int, n: int, poly: BiPoly | None = None) -> Fraction:
    """sum_{n1+n2=n} cardinal(n1, n2) * P_{2l}(n1, n2)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if poly is None:
        poly = moment_polynomial(two_l).poly
    return sum((cardinal(a, n - a) * poly.evaluate(a, n - a) for a in range(n + 1)), Fraction(0))


def mingo_nica_closed_form(two_l: int, n: int) -> Fraction:
    """Known closed forms of the above sum for 2l = 2 and 2l = 4."""
    from math import comb

    c2 = comb(2 * n, n) ** 2
    if two_l == 2:
        return Fraction(c2 * n * n * (n - 1), 6 * (2 * n - 1))
    if two_l == 4:
        return Fraction(c2 * n**3 * (n - 1) * (7 * n * n - 18 * n + 13),
                        60 * (2 * n - 1) * (2 * n - 3))
    raise ValueError(f"closed form known only for 2l in (2, 4), got {two_l}")


# -- cache ---------------------------------------------------------------------


def default_cache_path() -> Path:
    env = os.environ.get("AREAMOMENTS_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(Path.home(), ".cache")
    return Path(base) / "areamoments" / "moments.json"


def load_cache(path: Path | str) -> dict[int, BiPoly]:
    """Read cached polynomials, re-checking each one's invariants.  Missing file -> {}."""
    path = Path(path)
    if not path.exists():
        return {}
    doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("format_version") != CACHE_FORMAT_VERSION:
        raise ValueError(f"unsupported cache format_version {doc.get('format_version')!r}")
    out = {}
    for key, obj in doc.get("moments", {}).items():
        two_l = int(key)
        poly = BiPoly.from_json_obj(obj)
        check_moment_invariants(MomentPolynomial(two_l, poly))
        out[two_l] = poly
    return out


def save_cache(path: Path | str, moments: dict[int, BiPoly]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "format_version": CACHE_FORMAT_VERSION,
        "moments": {str(k): moments[k].to_json_obj() for k in sorted(moments)},
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    tmp.replace(path)


def cached_moment_polynomial(two_l: int, cache_path: Path | str | None) -> tuple[BiPoly, bool]:
    """Return (P_{2l}, hit) using the JSON cache when given; computes and stores on a miss."""
    if cache_path is None:
        return moment_polynomial(two_l).poly, False
    cache = load_cache(cache_path)
    if two_l in cache:
        return cache[two_l], True
    log.info("computing P_%d", two_l)
    poly = moment_polynomial(two_l).poly
    cache = load_cache(cache_path)
    cache[two_l] = poly
    save_cache(cache_path, cache)
    return poly, False
