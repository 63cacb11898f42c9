"""Exact integer/rational helpers and a sparse bivariate polynomial type.

Integers are Python ints and rationals are :class:`fractions.Fraction`; both
are arbitrary precision and always canonical, which is all the moment
machinery needs.  :class:`BiPoly` is the one structure built here.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Number = Union[int, Fraction]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def multinomial(parts: Iterable[int]) -> int:
    """(sum parts)! / prod(part!) computed as a product of binomials."""
    total = 0
    result = 1
    for p in parts:
        if p < 0:
            raise ValueError(f"negative part {p}")
        total += p
        result *= math.comb(total, p)
    return result


def inv_factorial(n: int) -> Fraction:
    """1/n!, with the convention 1/n! = 0 for negative n."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


class BiPoly:
    """Sparse polynomial in two variables with exact rational coefficients.

    Keys are exponent pairs ``(e_x, e_y)``.  The same type is used for the
    generating-function variables ``(x, y)`` and for the step counts
    ``(n1, n2)``; only the printed names differ.  Zero coefficients are never
    stored, so two equal polynomials have equal term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (a, b), c in terms.items():
                if a < 0 or b < 0:
                    raise ValueError(f"negative exponent in {(a, b)}")
                c = Fraction(c)
                if c:
                    clean[(int(a), int(b))] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[tuple[int, int], Fraction]) -> BiPoly:
        # caller guarantees canonical form
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def constant(cls, c: Number) -> BiPoly:
        return cls({(0, 0): c})

    @classmethod
    def var(cls, index: int) -> BiPoly:
        """The first (index 1) or second (index 2) variable."""
        if index == 1:
            return cls({(1, 0): 1})
        if index == 2:
            return cls({(0, 1): 1})
        raise ValueError(f"variable index must be 1 or 2, got {index}")

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Number], var_index: int = 1) -> BiPoly:
        """Build from a dense coefficient list ``[c0, c1, ...]`` in one variable."""
        if var_index not in (1, 2):
            raise ValueError(f"variable index must be 1 or 2, got {var_index}")
        if var_index == 1:
            return cls({(i, 0): c for i, c in enumerate(coeffs) if c})
        return cls({(0, i): c for i, c in enumerate(coeffs) if c})

    # -- container protocol -------------------------------------------------

    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(sorted(self._terms.items()))

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> BiPoly | None:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.constant(other)
        return None

    def __add__(self, other) -> BiPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> BiPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> BiPoly:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> BiPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in self._terms.items():
            for (d, e), f in other._terms.items():
                key = (a + d, b + e)
                out[key] = out.get(key, 0) + c * f
        return BiPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> BiPoly:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if not other:
            raise ZeroDivisionError("BiPoly division by zero")
        inv = 1 / Fraction(other)
        return BiPoly._raw({k: c * inv for k, c in self._terms.items()})

    def __pow__(self, n: int) -> BiPoly:
        if n < 0:
            raise ValueError("negative power")
        result = BiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- structure ----------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((a + b for a, b in self._terms), default=-1)

    def degree_in(self, var_index: int) -> int:
        i = var_index - 1
        return max((k[i] for k in self._terms), default=-1)

    def swap(self) -> BiPoly:
        return BiPoly._raw({(b, a): c for (a, b), c in self._terms.items()})

    def is_symmetric(self) -> bool:
        return all(self._terms.get((b, a)) == c for (a, b), c in self._terms.items())

    def evaluate(self, u: Number, v: Number) -> Fraction:
        total = Fraction(0)
        for (a, b), c in self._terms.items():
            total += c * Fraction(u) ** a * Fraction(v) ** b
        return total

    __call__ = evaluate

    def restrict(self, var_index: int, value: Number) -> BiPoly:
        """Substitute a number for one variable; the result keeps the other."""
        out: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in self._terms.items():
            if var_index == 1:
                key, c = (0, b), c * Fraction(value) ** a
            else:
                key, c = (a, 0), c * Fraction(value) ** b
            out[key] = out.get(key, 0) + c
        return BiPoly(out)

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                [a, b, f"{c.numerator}/{c.denominator}"]
                for (a, b), c in sorted(self._terms.items())
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> BiPoly:
        terms: dict[tuple[int, int], Fraction] = {}
        for a, b, c in obj["terms"]:
            key = (int(a), int(b))
            if key in terms:
                raise ValueError(f"duplicate term {key}")
            terms[key] = Fraction(c)
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> BiPoly:
        return cls.from_json_obj(json.loads(text))

    # -- display ------------------------------------------------------------

    def format(self, names: tuple[str, str] = ("x", "y")) -> str:
        """Monomial display, highest total degree first, e.g. ``n1*n2/3``."""
        keys = sorted(self._terms, key=lambda k: (-(k[0] + k[1]), -k[0]))
        return _join_terms(
            [(self._terms[k], _monomial((names[0], k[0]), (names[1], k[1]))) for k in keys]
        )

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"BiPoly({self.format()!r})"


def _power(name: str, e: int) -> str:
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def _monomial(*factors: tuple[str, int]) -> str:
    return "*".join(p for p in (_power(n, e) for n, e in factors) if p)


def _join_terms(terms: list[tuple[Fraction, str]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for i, (c, mono) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        num, den = abs(c.numerator), c.denominator
        if mono:
            body = mono if num == 1 else f"{num}*{mono}"
        else:
            body = str(num)
        if den != 1:
            body += f"/{den}"
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def poly_diffop(p: BiPoly) -> BiPoly:
    """Apply x d/dx - y d/dy: the monomial x^a y^b picks up a factor (a - b)."""
    return BiPoly._raw({(a, b): c * (a - b) for (a, b), c in p._terms.items() if a != b})


def falling_factorial_poly(var_index: int, depth: int) -> BiPoly:
    """n (n-1) ... (n-depth+1) in the chosen variable."""
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    coeffs = [1]
    for j in range(depth):
        coeffs = _mul_linear(coeffs, -j, 1)
    return BiPoly.from_univariate(coeffs, var_index)


def _mul_linear(coeffs: list[int], c0: int, c1: int) -> list[int]:
    # coeffs * (c0 + c1*t)
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c * c0
        out[i + 1] += c * c1
    return out


def to_elementary_symmetric(p: BiPoly) -> dict[tuple[int, int], Fraction]:
    """Rewrite a symmetric polynomial in e2 = n1*n2 and e1 = n1 + n2.

    Returns a map ``(i, j) -> c`` meaning ``c * e2^i * e1^j``.  Raises
    ``ValueError`` if ``p`` is not symmetric.
    """
    if not p.is_symmetric():
        raise ValueError("polynomial is not symmetric in its two variables")
    e1 = BiPoly({(1, 0): 1, (0, 1): 1})
    e2 = BiPoly({(1, 1): 1})
    out: dict[tuple[int, int], Fraction] = {}
    rest = p
    while rest:
        # lex-leading term x^a y^b has a >= b for a symmetric polynomial
        a, b = max(rest._terms)
        c = rest._terms[(a, b)]
        out[(b, a - b)] = c
        rest = rest - (e2 ** b) * (e1 ** (a - b)) * c
    return out


def format_elementary_symmetric(p: BiPoly) -> str:
    """Display form in terms of (n1*n2) and (n1+n2)."""
    basis = to_elementary_symmetric(p)
    keys = sorted(basis, key=lambda k: (-(2 * k[0] + k[1]), -k[0]))
    return _join_terms(
        [(basis[k], _monomial(("(n1*n2)", k[0]), ("(n1+n2)", k[1]))) for k in keys]
    )
