"""Normalized carrier functions on the half line.

A carrier is the exact symbolic form of a normalized basis function

    sign * sqrt(norm_squared) * x**(half_power/2) * exp(-x/2) * core(x)

with ``core`` an exact Laurent polynomial and ``norm_squared`` an exact
positive rational.  Square roots are taken only at evaluation time, so all
identity checking upstream stays in exact arithmetic.

Two index conventions are supported: the two-label family ``carrier_M(n, p)``
(the parameter of the underlying Laguerre polynomial is p - n) and the
single-spin relabelling ``carrier_L(j, m)`` with n = j + m, p = j - m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .exactpoly import LaurentPoly, laguerre
from .radicals import float_sqrt


class BasisIndex(NamedTuple):
    """Label pair for the two-label basis; both entries are >= 0."""

    n: int
    p: int


@dataclass(frozen=True)
class Carrier:
    """Exact symbolic basis function.

    ``label`` records which (n, p) the carrier was built for and is not part
    of equality: two carriers are equal when they are the same function with
    the same sign.  Canonically constructed carriers have half_power >= 0;
    symbolic derivatives may go negative (they are only evaluated at x > 0).
    """

    sign: int
    norm_squared: Fraction
    half_power: int
    core: LaurentPoly
    label: BasisIndex | None = field(default=None, compare=False)

    def norm_factor(self) -> float:
        return self.sign * float_sqrt(self.norm_squared)


def carrier_M(n: int, p: int) -> Carrier:
    """Normalized two-label basis function in canonical form.

    For p >= n this is sqrt(n!/p!) x**((p-n)/2) exp(-x/2) L_n(p-n).  For
    p < n the negative-parameter extension is folded in, which flips the
    overall sign by (-1)**(n-p) and swaps the roles of the labels, so the
    stored half power is always non-negative.
    """
    if not (isinstance(n, int) and isinstance(p, int)) or n < 0 or p < 0:
        raise ValueError(f"labels must be non-negative integers (got n={n!r}, p={p!r})")
    lo, hi = (n, p) if n <= p else (p, n)
    sign = 1 if (n - p) % 2 == 0 or n <= p else -1
    return Carrier(
        sign=sign,
        norm_squared=Fraction(factorial(lo), factorial(hi)),
        half_power=hi - lo,
        core=laguerre(lo, hi - lo),
        label=BasisIndex(n, p),
    )


def carrier_L(j, m) -> Carrier:
    """Spin-labelled carrier: requires j+m and j-m to be non-negative integers.

    Half-integer j, m are accepted as long as the two combinations are
    integral (plane modes later restrict to integer j, m).
    """
    j = Fraction(j)
    m = Fraction(m)
    n = j + m
    p = j - m
    if n.denominator != 1 or p.denominator != 1 or n < 0 or p < 0:
        raise ValueError(
            f"j+m and j-m must be non-negative integers (got j={j}, m={m})"
        )
    return carrier_M(int(n), int(p))


def derived_core(half_power: int, core: LaurentPoly) -> LaurentPoly:
    """Core of d/dx [x**(half_power/2) exp(-x/2) core(x)], same outer factors.

    The product rule gives (half_power/2) x**-1 core - core/2 + core', kept
    as a Laurent polynomial so repeated differentiation stays exact.
    """
    out = core.derivative() - Fraction(1, 2) * core
    if half_power != 0:
        out = out + Fraction(half_power, 2) * core.shift(-1)
    return out


def evaluate(c: Carrier, x: float) -> float:
    """Pointwise value of the carrier.

    x = 0 is allowed for canonical carriers: the value is 0 when the half
    power is positive and core(0) times the normalization when it is zero.
    """
    if x < 0:
        raise ValueError(f"x must be non-negative (got {x})")
    if x == 0:
        if c.half_power > 0:
            return 0.0
        if c.half_power < 0 or (c.core.low_degree() or 0) < 0:
            raise ValueError("carrier is singular at x = 0")
        return c.norm_factor() * float(c.core.coefficient(0))
    return (
        c.norm_factor()
        * x ** (c.half_power / 2)
        * math.exp(-x / 2)
        * c.core.eval_float(x)
    )


def evaluate_derivative(c: Carrier, x: float, order: int = 1) -> float:
    """Evaluate the first or second derivative of the carrier at x > 0.

    The derivative is taken symbolically (product rule over the power, the
    exponential and the core) and only then evaluated; no finite differences.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2 (got {order})")
    if x <= 0:
        raise ValueError(f"x must be positive (got {x})")
    core = derived_core(c.half_power, c.core)
    if order == 2:
        core = derived_core(c.half_power, core)
    return (
        c.norm_factor()
        * x ** (c.half_power / 2)
        * math.exp(-x / 2)
        * core.eval_float(x)
    )
