"""Exact Laurent polynomials with integer coefficients.

Coefficients are Python ints, so nothing overflows. A polynomial carries a
variable tag (``"A"`` for brackets, ``"q"`` for graded ranks); arithmetic
between different variables is refused.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

__all__ = ["LaurentPoly", "PolyParseError", "mod4_class"]


class PolyParseError(ValueError):
    pass


class LaurentPoly:
    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = (), var: str = "A"):
        acc: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            acc[int(exp)] = acc.get(int(exp), 0) + int(coeff)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self.var = var

    # construction helpers

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, var: str = "A") -> LaurentPoly:
        return cls({exp: coeff}, var)

    @classmethod
    def constant(cls, c: int, var: str = "A") -> LaurentPoly:
        return cls({0: c}, var)

    @classmethod
    def zero(cls, var: str = "A") -> LaurentPoly:
        return cls({}, var)

    # inspection

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in descending exponent order."""
        return sorted(self._terms.items(), reverse=True)

    def coeff(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def exponents(self) -> list[int]:
        return sorted(self._terms, reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic

    def _check(self, other: LaurentPoly) -> None:
        if self.var != other.var and self._terms and other._terms:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.var)
        return NotImplemented

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, self.var if self._terms else other.var)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out, self.var if self._terms else other.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({e * n: c ** (-n)}, self.var)
        result = LaurentPoly.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by var**k."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()}, self.var)

    def mirror(self) -> LaurentPoly:
        """Substitute var -> var**-1."""
        return LaurentPoly({-e: c for e, c in self._terms.items()}, self.var)

    def q_to_A(self) -> LaurentPoly:
        """Substitute q = -A**-2 into a polynomial in q."""
        return LaurentPoly({-2 * e: (-1) ** (e % 2) * c for e, c in self._terms.items()}, "A")

    # comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.var == other.var and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.var, frozenset(self._terms.items())))

    # text

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = self.var if e == 1 else f"{self.var}^{e}"
                body = mono if mag == 1 else f"{mag}{mono}"
            if i == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(sign + body)
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r}, var={self.var!r})"

    def to_pairs(self) -> list[list[int]]:
        """JSON-friendly [[exp, coeff], ...] in descending exponent order."""
        return [[e, c] for e, c in self.terms()]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Iterable[int]], var: str = "A") -> LaurentPoly:
        return cls(((int(e), int(c)) for e, c in pairs), var)

    @classmethod
    def parse(cls, text: str, var: str | None = None) -> LaurentPoly:
        """Parse text such as ``A^7+A^3+A^-1-A^-9`` or ``q^2+2+q^-2``.

        Accepts an optional ``*`` between coefficient and variable and
        implicit exponent 1. The variable is inferred when not given.
        """
        s = re.sub(r"\s+", "", text)
        if not s:
            raise PolyParseError("empty polynomial text")
        if var is None:
            letters = set(re.findall(r"[A-Za-z]", s))
            if len(letters) > 1:
                raise PolyParseError(f"more than one variable in {text!r}")
            var = letters.pop() if letters else "A"
        if s == "0":
            return cls.zero(var)
        term_re = re.compile(
            r"([+-]?)(\d*)\*?(?:(" + re.escape(var) + r")(?:\^(-?\d+))?)?"
        )
        pos = 0
        out: dict[int, int] = {}
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise PolyParseError(f"cannot parse polynomial at column {pos + 1}: {text!r}")
            if pos > 0 and not m.group(1):
                raise PolyParseError(f"missing operator at column {pos + 1}: {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            out[exp] = out.get(exp, 0) + sign * coeff
            pos = m.end()
        return cls(out, var)


def mod4_class(p: LaurentPoly) -> int | str:
    """Common residue mod 4 of all exponents, or ``"mixed"``.

    The zero polynomial is vacuously uniform; 0 is returned for it.
    """
    residues = {e % 4 for e in p.exponents()}
    if not residues:
        return 0
    if len(residues) == 1:
        return residues.pop()
    return "mixed"
