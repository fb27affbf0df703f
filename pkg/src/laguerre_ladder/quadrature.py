"""Gauss-Laguerre quadrature and inner products on the half line.

Nodes are Newton-refined roots of the order-n Laguerre polynomial, started
from the classic asymptotic guesses; weights come from the standard
formula.  Inner products of carriers reduce to weight exp(-x) times an
exact polynomial, which an order-n rule integrates exactly through degree
2n - 1, so orthonormality checks are limited only by rounding in the sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basis import Carrier, carrier_M
from .exactpoly import LaurentPoly, laguerre
from .radicals import float_sqrt

_MAX_ORDER = 200
_SMALLEST_POSITIVE = 5e-324  # weights below double range are clamped here


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integrals of exp(-x) * f(x) over (0, inf)."""

    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.nodes)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.nodes, self.nodes[1:])):
            raise RuntimeError("quadrature nodes are not strictly increasing")
        if any(w <= 0 for w in self.weights):
            raise RuntimeError("quadrature weights are not positive")
        if abs(math.fsum(self.weights) - 1.0) > 1e-13:
            raise RuntimeError("quadrature weights do not sum to 1")

    def integrate(self, f) -> float:
        return math.fsum(w * f(x) for x, w in zip(self.nodes, self.weights))


def _lag_pair(order: int, x: float) -> tuple[float, float]:
    """(L_order(x), L_{order-1}(x)) by the stable three-term recurrence."""
    prev, cur = 0.0, 1.0
    for k in range(order):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur, prev


class _ExactEvaluator:
    """Exact polynomial evaluation at dyadic (float) points.

    Coefficients are cleared to a common integer denominator once, so each
    evaluation is pure integer Horner: no rounding, no rational gcd churn.
    """

    def __init__(self, poly: LaurentPoly):
        denom = 1
        degree = poly.degree() or 0
        for _, c in poly.items():
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
        self.denom = denom
        self.ints = [int(poly.coefficient(k) * denom) for k in range(degree + 1)]
        self.degree = degree

    def at(self, z: float) -> Fraction:
        m, den = z.as_integer_ratio()
        e = den.bit_length() - 1
        acc = 0
        for k in range(self.degree, -1, -1):
            acc = acc * m + (self.ints[k] << (e * (self.degree - k)))
        return Fraction(acc, self.denom << (e * self.degree))


def gauss_laguerre(order: int) -> QuadratureRule:
    """Rule with the given node count, exact through degree 2*order - 1."""
    if not isinstance(order, int) or not (1 <= order <= _MAX_ORDER):
        raise ValueError(f"order must be an integer in [1, {_MAX_ORDER}] (got {order!r})")
    poly = laguerre(order, 0)
    value_at = _ExactEvaluator(poly)
    slope_at = _ExactEvaluator(poly.derivative())

    nodes: list[float] = []
    z = 0.0
    for i in range(order):
        if i == 0:
            z = 3.0 / (1.0 + 2.4 * order)
        elif i == 1:
            z += 15.0 / (1.0 + 2.5 * order)
        else:
            ai = i - 1
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
        # Stage 1: float Newton on the recurrence gets within rounding noise.
        converged = False
        for _ in range(60):
            val, below = _lag_pair(order, z)
            dz = val * z / (order * (val - below))
            z -= dz
            if abs(dz) <= 1e-10 * abs(z):
                converged = True
                break
        if not converged:
            raise RuntimeError(f"Newton iteration failed to converge at node {i}")
        # Stage 2: Newton on the exact coefficients until |dz| < 1e-15 * z;
        # quadratic convergence makes the rounded result the true root to
        # the last bit, which the weight formula then inherits.
        for _ in range(4):
            dz_exact = value_at.at(z) / slope_at.at(z)
            done = abs(dz_exact) <= Fraction(z) * Fraction(1, 10**15)
            z = float(Fraction(z) - dz_exact)
            if done:
                break
        else:
            raise RuntimeError(f"exact refinement failed to converge at node {i}")
        nodes.append(z)

    # Weights by the standard formula, assembled in exact rational arithmetic
    # so the conversion to float is the only rounding.  True weights at the
    # far nodes of very large rules sit below the double floor; those are
    # clamped to the smallest positive float (error <= 5e-324).
    weights: list[float] = []
    above_at = _ExactEvaluator(laguerre(order + 1, 0))
    for z in nodes:
        denom = (order + 1) * above_at.at(z)
        weights.append(max(float(Fraction(z) / (denom * denom)), _SMALLEST_POSITIVE))
    return QuadratureRule(nodes=tuple(nodes), weights=tuple(weights))


def _required_order(degree: int) -> int:
    return degree // 2 + 1


def inner_product(a: Carrier, b: Carrier, rule: QuadratureRule) -> float:
    """Plain-measure inner product of two carriers.

    The product must reduce to exp(-x) times a true polynomial: the half
    powers must have even sum (otherwise the integrand carries sqrt(x) and
    the rule would silently approximate, so it is refused) and the rule must
    cover the combined degree.
    """
    combined = a.half_power + b.half_power
    if combined % 2:
        raise ValueError(
            "integrand contains sqrt(x) (odd combined half power); refusing to approximate"
        )
    poly = (a.core * b.core).shift(combined // 2)
    if poly.is_zero():
        return 0.0
    if poly.low_degree() < 0:
        raise ValueError("integrand is not polynomial (negative powers remain)")
    need = _required_order(poly.degree())
    if rule.order < need:
        raise ValueError(
            f"rule order {rule.order} insufficient for degree {poly.degree()}; "
            f"need at least {need}"
        )
    scale = a.sign * b.sign * float_sqrt(a.norm_squared * b.norm_squared)
    return scale * rule.integrate(poly.eval_float)


def weighted_inner_product(
    a: LaurentPoly, b: LaurentPoly, alpha: int, rule: QuadratureRule
) -> float:
    """Unnormalized inner product with weight x**alpha exp(-x)."""
    if alpha < 0:
        raise ValueError(f"weight exponent must be non-negative (got {alpha})")
    poly = (a * b).shift(alpha)
    if poly.is_zero():
        return 0.0
    if poly.low_degree() < 0:
        raise ValueError("integrand is not polynomial (negative powers remain)")
    need = _required_order(poly.degree())
    if rule.order < need:
        raise ValueError(
            f"rule order {rule.order} insufficient for degree {poly.degree()}; "
            f"need at least {need}"
        )
    return rule.integrate(poly.eval_float)


def _weightless_values(c: Carrier, rule: QuadratureRule) -> np.ndarray:
    """Values of the carrier with the exp(-x/2) factor stripped.

    With the half weight removed, products of two of these against the rule's
    exp(-x) weight reproduce plain-measure inner products exactly.
    """
    scale = c.norm_factor()
    return np.array(
        [
            scale * x ** (c.half_power / 2) * c.core.eval_float(x)
            for x in rule.nodes
        ]
    )


def gram_matrix(alpha: int, nmax: int, rule: QuadratureRule) -> np.ndarray:
    """Gram matrix of the normalized family at fixed parameter alpha.

    Entry (n, m) is the inner product of members n and m for n, m from the
    first valid index through nmax; it should be the identity matrix.
    """
    n0 = max(0, -alpha)
    if nmax < n0:
        raise ValueError(f"nmax={nmax} below first valid index {n0} for alpha={alpha}")
    carriers = [carrier_M(k, k + alpha) for k in range(n0, nmax + 1)]
    top_degree = max(
        2 * c.core.degree() + c.half_power for c in carriers
    )
    need = _required_order(top_degree)
    if rule.order < need:
        raise ValueError(
            f"rule order {rule.order} insufficient for the family; need at least {need}"
        )
    values = np.vstack([_weightless_values(c, rule) for c in carriers])
    w = np.array(rule.weights)
    return (values * w) @ values.T


def projection_convergence(
    target: Carrier, family_alpha: int, max_n: int, rule: QuadratureRule
) -> list[float]:
    """Residual norms of the target after projecting onto the first N members.

    Returns the residual for N = 0..max_n.  The residual function itself is
    accumulated on the nodes and its norm taken directly (subtracting squared
    norms would halve the attainable precision), so a target inside the span
    drops to rounding level, not its square root.  The sequence is
    non-increasing by orthogonality.
    """
    if (target.half_power - abs(family_alpha)) % 2:
        raise ValueError(
            "target parity does not match the family (odd half-power difference)"
        )
    n0 = max(0, -family_alpha)
    members = [carrier_M(k, k + family_alpha) for k in range(n0, max_n + 1)]
    twice_deg = lambda c: c.half_power + 2 * (c.core.degree() or 0)
    need = _required_order(max(twice_deg(target), max(map(twice_deg, members))))
    if rule.order < need:
        raise ValueError(
            f"rule order {rule.order} insufficient for the projection; "
            f"need at least {need}"
        )
    w = np.array(rule.weights)
    residual = _weightless_values(target, rule)
    member_values = [_weightless_values(c, rule) for c in members]
    residuals: list[float] = []
    for k in range(0, max_n + 1):
        if k >= n0:
            y = member_values[k - n0]
            coeff = float(np.dot(w * residual, y))
            residual = residual - coeff * y
        residuals.append(math.sqrt(max(float(np.dot(w, residual * residual)), 0.0)))
    return residuals
