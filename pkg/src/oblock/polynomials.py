"""Exact integer polynomials in ``q`` and Laurent polynomials in the shift ``v``.

>>> p = PolynomialQ((1, 1))
>>> str(p)
'1 + q'
>>> LaurentV.from_kl(p, 4)
LaurentV('v^2 + v^4')
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction

__all__ = ["PolynomialQ", "LaurentV"]


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _term(coeff: int, var: str, exp: int) -> str:
    if exp == 0:
        return str(coeff)
    mono = var if exp == 1 else f"{var}^{exp}"
    if coeff == 1:
        return mono
    if coeff == -1:
        return "-" + mono
    return f"{coeff}{mono}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class PolynomialQ:
    """A polynomial in ``q`` with integer coefficients, ``coeffs[k]`` at ``q^k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(int(c) for c in coeffs)

    @classmethod
    def one(cls) -> PolynomialQ:
        return cls((1,))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, q: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * q + c
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, PolynomialQ):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolynomialQ({list(self.coeffs)})"

    def __str__(self) -> str:
        return _join([_term(c, "q", k) for k, c in enumerate(self.coeffs) if c])


class LaurentV:
    """A finitely supported Laurent polynomial in ``v``; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def from_kl(cls, p: PolynomialQ, length_gap: int) -> LaurentV:
        """``v^gap * p(v^-2)``: the graded form of a KL polynomial."""
        return cls((length_gap - 2 * k, c) for k, c in enumerate(p.coeffs) if c)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentV:
        return cls({exp: coeff})

    def terms(self) -> tuple[tuple[int, int], ...]:
        """``(exponent, coefficient)`` pairs in increasing exponent order."""
        return self._terms

    def coeff(self, exp: int) -> int:
        for e, c in self._terms:
            if e == exp:
                return c
        return 0

    def degrees(self) -> list[int]:
        return [e for e, _ in self._terms]

    def shift(self, k: int) -> LaurentV:
        """Multiply by ``v^k``."""
        return LaurentV((e + k, c) for e, c in self._terms)

    def __call__(self, v):
        """Evaluate; exact, returning a ``Fraction`` only when the value is not integral."""
        total = sum((c * Fraction(v) ** e for e, c in self._terms), Fraction(0))
        return int(total) if total.denominator == 1 else total

    def __add__(self, other: LaurentV) -> LaurentV:
        return LaurentV(self._terms + other._terms)

    def __mul__(self, other: LaurentV) -> LaurentV:
        return LaurentV((e1 + e2, c1 * c2) for e1, c1 in self._terms for e2, c2 in other._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentV):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == (((0, other),) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"LaurentV({str(self)!r})"

    def __str__(self) -> str:
        return _join([_term(c, "v", e) for e, c in self._terms])
