"""Exact Laurent-polynomial arithmetic over the rationals.

A Laurent polynomial is a sparse map ``{exponent: Fraction}`` in which zero
coefficients are never stored, so structural equality is mathematical
equality and "is this residual the zero polynomial" is an exact question.
On top of the ring operations the module builds the associated Laguerre
polynomials with integer parameter, including the negative-parameter
extension, together with exact residuals for their defining second-order
differential equation and the parameter-shift ladder recurrences.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

RationalLike = int | Fraction


class LaurentPoly:
    """Sparse Laurent polynomial with exact rational coefficients.

    Exponents may be negative.  Instances are treated as immutable: every
    operation returns a new object and nothing mutates ``_coeffs`` after
    construction.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, RationalLike] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for k, c in coeffs.items():
                c = Fraction(c)
                if c:
                    clean[int(k)] = c
        self._coeffs = clean

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: RationalLike) -> "LaurentPoly":
        return LaurentPoly({0: c})

    @staticmethod
    def x(power: int = 1, coeff: RationalLike = 1) -> "LaurentPoly":
        return LaurentPoly({power: coeff})

    # -- inspection --------------------------------------------------------

    def coefficient(self, k: int) -> Fraction:
        return self._coeffs.get(k, Fraction(0))

    def items(self) -> list[tuple[int, Fraction]]:
        """Terms in ascending exponent order."""
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int | None:
        """Largest exponent, or None for the zero polynomial."""
        return max(self._coeffs) if self._coeffs else None

    def low_degree(self) -> int | None:
        """Smallest exponent, or None for the zero polynomial."""
        return min(self._coeffs) if self._coeffs else None

    def max_abs_coefficient(self) -> Fraction:
        if not self._coeffs:
            return Fraction(0)
        return max(abs(c) for c in self._coeffs.values())

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly(out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) - c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict[int, Fraction] = {}
            for k1, c1 in self._coeffs.items():
                for k2, c2 in other._coeffs.items():
                    k = k1 + k2
                    out[k] = out.get(k, Fraction(0)) + c1 * c2
            return LaurentPoly(out)
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: c * other for k, c in self._coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x**k (k may be negative)."""
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def derivative(self) -> "LaurentPoly":
        """Exact formal derivative, term by term."""
        return LaurentPoly({k - 1: k * c for k, c in self._coeffs.items() if k != 0})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, x: RationalLike) -> Fraction:
        """Horner evaluation in exact rational arithmetic."""
        x = Fraction(x)
        if not self._coeffs:
            return Fraction(0)
        lo = min(self._coeffs)
        hi = max(self._coeffs)
        if x == 0:
            if lo < 0:
                raise ZeroDivisionError("Laurent polynomial with negative powers at x = 0")
            return self._coeffs.get(0, Fraction(0))
        acc = Fraction(0)
        for k in range(hi, lo - 1, -1):
            acc = acc * x + self._coeffs.get(k, Fraction(0))
        return acc * x**lo

    def eval_float(self, x: float) -> float:
        """Evaluate at a float point.

        The point is lifted to an exact rational, Horner runs on the exact
        coefficients, and only the final result is converted, so there is no
        cancellation error even for high-degree oscillatory cores.
        """
        return float(self.eval_exact(Fraction(x)))

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Debug rendering: ascending powers, "c*x^k" terms joined by " + "."""
        if not self._coeffs:
            return "0"
        return " + ".join(f"{c}*x^{k}" for k, c in self.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self.render()})"


def derivative(p: LaurentPoly) -> LaurentPoly:
    """Exact formal derivative of a Laurent polynomial."""
    return p.derivative()


def _validate_index(n: int, alpha: int) -> None:
    if not isinstance(n, int) or not isinstance(alpha, int):
        raise ValueError(f"indices must be integers (got n={n!r}, alpha={alpha!r})")
    if n < 0:
        raise ValueError(f"n must be non-negative (got n={n})")
    if n + alpha < 0:
        raise ValueError(f"n + alpha must be non-negative (got n={n}, alpha={alpha})")


@lru_cache(maxsize=None)
def laguerre(n: int, alpha: int) -> LaurentPoly:
    """Exact associated Laguerre polynomial with integer parameter.

    For alpha >= 0 the polynomial is built by the three-term recurrence
    (exact and quadratic in the coefficient count).  For alpha < 0 the
    integer extension

        (factorial(n+alpha)/factorial(n)) * (-x)**(-alpha) * laguerre(n+alpha, -alpha)

    is used, valid for n + alpha >= 0; its lowest-order term sits at degree
    ``-alpha`` by construction.
    """
    _validate_index(n, alpha)
    if alpha < 0:
        a = -alpha
        prefactor = Fraction(factorial(n - a), factorial(n))
        sign = -1 if a % 2 else 1
        return (sign * prefactor) * laguerre(n - a, a).shift(a)
    if n == 0:
        return LaurentPoly.const(1)
    prev = LaurentPoly.const(1)
    cur = LaurentPoly({0: 1 + alpha, 1: -1})
    for k in range(1, n):
        # (k+1) L_{k+1} = (2k+1+alpha - x) L_k - (k+alpha) L_{k-1}
        nxt = (2 * k + 1 + alpha) * cur - cur.shift(1) - (k + alpha) * prev
        cur, prev = Fraction(1, k + 1) * nxt, cur
    return cur


def de_residual(n: int, alpha: int) -> LaurentPoly:
    """Residual of [x d^2/dx^2 + (1+alpha-x) d/dx + n] applied exactly.

    Zero for every valid index, including the negative-parameter extension.
    """
    p = laguerre(n, alpha)
    d1 = p.derivative()
    d2 = d1.derivative()
    return d2.shift(1) + (1 + alpha) * d1 - d1.shift(1) + n * p


def alpha_ladder_check(n: int, alpha: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Residuals of the two parameter-shift ladder identities.

    Raising: [-d/dx + 1] L_n(alpha) - L_n(alpha+1).
    Lowering: [x d/dx + alpha] L_n(alpha) - (n+alpha) L_n(alpha-1); this
    side needs n + alpha - 1 >= 0 and raises a ValueError outside that
    range.  Both residuals are the zero polynomial on valid input.
    """
    _validate_index(n, alpha)
    if n + (alpha - 1) < 0:
        raise ValueError(
            f"lowering identity needs n + alpha - 1 >= 0 (got n={n}, alpha={alpha})"
        )
    p = laguerre(n, alpha)
    d1 = p.derivative()
    raise_res = (p - d1) - laguerre(n, alpha + 1)
    lower_res = d1.shift(1) + alpha * p - (n + alpha) * laguerre(n, alpha - 1)
    return raise_res, lower_res


def three_term_residual(n: int, alpha: int) -> LaurentPoly:
    """Residual of (n+1)L_{n+1} - (2n+1+alpha-x)L_n + (n+alpha)L_{n-1}."""
    if n < 1:
        raise ValueError("three-term residual needs n >= 1")
    _validate_index(n - 1, alpha)
    cur = laguerre(n, alpha)
    return (
        (n + 1) * laguerre(n + 1, alpha)
        - (2 * n + 1 + alpha) * cur
        + cur.shift(1)
        + (n + alpha) * laguerre(n - 1, alpha)
    )
