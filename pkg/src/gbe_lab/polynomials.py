"""Exact polynomial arithmetic for the moment engine.

:class:`BivarPoly` is a polynomial in the pair (u, b) with exact rational
coefficients, where u stands for 1/(n*beta) and b for beta.  Every exact
finite-size moment and variance formula lives in this ring; floats only
appear at the final substitution step.  :class:`Polynomial` is the exact
univariate test-function type.

Coefficients are Python ints whenever possible (the moment sums are
integer-valued) and `Fraction` otherwise; both are exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = ["BivarPoly", "Polynomial"]


def _is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


class BivarPoly:
    """Polynomial in (u, b) with exact rational coefficients.

    Terms map (power of u, power of b) to a nonzero coefficient; the zero
    polynomial has no terms.  All ring operations are exact.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[tuple[int, int], object] = {}
        if terms:
            for key, c in terms.items():
                if not _is_rational(c):
                    raise TypeError(f"coefficient {c!r} is not exact")
                if c != 0:
                    ku, kb = key
                    clean[(int(ku), int(kb))] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "BivarPoly":
        return cls()

    @classmethod
    def constant(cls, c) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, ku: int, kb: int, c=1) -> "BivarPoly":
        return cls({(ku, kb): c})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            newc = out.get(key, 0) + c
            if newc == 0:
                out.pop(key, None)
            else:
                out[key] = newc
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if _is_rational(other):
            if other == 0:
                return BivarPoly()
            return BivarPoly({k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, int], object] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                newc = out.get(key, 0) + c1 * c2
                if newc == 0:
                    out.pop(key, None)
                else:
                    out[key] = newc
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = BivarPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if _is_rational(other):
            other = BivarPoly.constant(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @staticmethod
    def _coerce(other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        if _is_rational(other):
            return BivarPoly.constant(other)
        raise TypeError(f"cannot combine BivarPoly with {other!r}")

    # -- queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, ku: int, kb: int):
        return self.terms.get((ku, kb), 0)

    def u_degree(self) -> int:
        """Largest u power; -1 for the zero polynomial."""
        return max((k[0] for k in self.terms), default=-1)

    def beta_poly_of_u(self, ku: int) -> dict[int, object]:
        """Coefficients in b of the u^ku part."""
        return {kb: c for (a, kb), c in self.terms.items() if a == ku}

    def beta_degree_of_u(self, ku: int) -> int:
        """Largest b power within the u^ku part; -1 if that part vanishes."""
        return max((k[1] for k in self.terms if k[0] == ku), default=-1)

    # -- evaluation ----------------------------------------------------

    def evaluate(self, u: float, beta: float) -> float:
        """Float substitution; the only place exactness is given up."""
        total = 0.0
        for (ku, kb), c in self.terms.items():
            total += float(c) * u**ku * beta**kb
        return total

    def evaluate_exact(self, u, beta) -> Fraction:
        """Substitution with exact rationals."""
        uu = Fraction(u)
        bb = Fraction(beta)
        total = Fraction(0)
        for (ku, kb), c in self.terms.items():
            total += Fraction(c) * uu**ku * bb**kb
        return total

    # -- rendering -------------------------------------------------------

    def render(self) -> str:
        """Text form with terms sorted by (u power, b power), e.g. "1 + (2 - b)*u"."""
        if not self.terms:
            return "0"
        pieces = []
        for ku in sorted({k[0] for k in self.terms}):
            bpoly = sorted(self.beta_poly_of_u(ku).items())
            btxt = _render_beta_poly(bpoly)
            if ku == 0:
                pieces.append(btxt)
                continue
            utxt = "u" if ku == 1 else f"u^{ku}"
            if len(bpoly) > 1:
                pieces.append(f"({btxt})*{utxt}")
            elif btxt == "1":
                pieces.append(utxt)
            elif btxt == "-1":
                pieces.append(f"-{utxt}")
            else:
                pieces.append(f"{btxt}*{utxt}")
        text = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("-"):
                text += " - " + piece[1:]
            else:
                text += " + " + piece
        return text

    def __repr__(self):
        return f"BivarPoly({self.render()})"


def _render_beta_poly(items) -> str:
    parts = []
    for kb, c in items:
        if kb == 0:
            mono = str(c)
        else:
            btxt = "b" if kb == 1 else f"b^{kb}"
            if c == 1:
                mono = btxt
            elif c == -1:
                mono = f"-{btxt}"
            else:
                mono = f"{c}*{btxt}"
        parts.append(mono)
    text = parts[0]
    for mono in parts[1:]:
        if mono.startswith("-"):
            text += " - " + mono[1:]
        else:
            text += " + " + mono
    return text


class Polynomial:
    """Univariate polynomial c0 + c1*x + ... with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cleaned = []
        for c in coeffs:
            if isinstance(c, float):
                c = Fraction(c)
            elif not _is_rational(c):
                c = Fraction(c)
            cleaned.append(c)
        while cleaned and cleaned[-1] == 0:
            cleaned.pop()
        self.coeffs = tuple(cleaned)

    @classmethod
    def monomial(cls, r: int) -> "Polynomial":
        return cls([0] * r + [1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, r: int):
        return self.coeffs[r] if 0 <= r < len(self.coeffs) else 0

    def derivative(self) -> "Polynomial":
        return Polynomial([r * c for r, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; works on floats and numpy arrays."""
        if isinstance(x, np.ndarray):
            out = np.zeros_like(x, dtype=np.float64)
            for c in reversed(self.coeffs):
                out = out * x + float(c)
            return out
        out = 0.0
        for c in reversed(self.coeffs):
            out = out * x + float(c)
        return out

    def evaluate_exact(self, x) -> Fraction:
        xx = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * xx + c
        return out

    def __add__(self, other):
        if _is_rational(other):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if _is_rational(other):
            other = Polynomial([other])
        return self + (-other)

    def __mul__(self, other):
        if _is_rational(other):
            return Polynomial([c * other for c in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        parts = []
        for r, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if r == 0:
                parts.append(str(c))
            elif r == 1:
                parts.append(f"{c}*x" if c != 1 else "x")
            else:
                parts.append(f"{c}*x^{r}" if c != 1 else f"x^{r}")
        return "Polynomial(" + " + ".join(parts) + ")"
