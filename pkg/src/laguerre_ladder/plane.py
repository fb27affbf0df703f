"""Orthonormal modes on the plane and their spin-ladder operators.

The mode with angular index m and total index j is exp(i m phi) times the
radial carrier evaluated at r**2.  A polar grid pairs half-line quadrature
nodes in x = r**2 (so radial integrals against 2 r dr collapse to the exact
half-line rule) with a uniform power-of-two angular grid (so the angular
average of exp(i d phi) is exactly delta for |d| below the node count).
Decomposition, synthesis and the phase-dressed ladder action on mode
amplitudes live here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .basis import Carrier, carrier_L, evaluate, evaluate_derivative
from .opalgebra import OperatorName
from .quadrature import QuadratureRule, gauss_laguerre
from .radicals import SqrtSum


class ModeIndex(NamedTuple):
    """Mode label with integer j >= 0 and |m| <= j."""

    j: int
    m: int


def _check_mode(idx: ModeIndex) -> ModeIndex:
    j, m = idx
    if not (isinstance(j, int) and isinstance(m, int)) or j < 0 or abs(m) > j:
        raise ValueError(f"mode index needs integer j >= 0 and |m| <= j (got j={j!r}, m={m!r})")
    return ModeIndex(j, m)


def modes_up_to(jmax: int) -> list[ModeIndex]:
    return [ModeIndex(j, m) for j in range(jmax + 1) for m in range(-j, j + 1)]


@dataclass(frozen=True)
class PolarGrid:
    """Product grid: half-line rule in x = r**2 times uniform angles."""

    rule: QuadratureRule
    angular_count: int

    def __post_init__(self):
        q = self.angular_count
        if q < 1 or q & (q - 1):
            raise ValueError(f"angular count must be a power of two (got {q})")

    @staticmethod
    def build(radial_order: int, angular_count: int) -> "PolarGrid":
        return PolarGrid(rule=gauss_laguerre(radial_order), angular_count=angular_count)

    @property
    def radial_x(self) -> tuple[float, ...]:
        return self.rule.nodes

    @property
    def radial_nodes(self) -> tuple[float, ...]:
        return tuple(math.sqrt(x) for x in self.rule.nodes)

    @property
    def radial_weights(self) -> tuple[float, ...]:
        return self.rule.weights

    @property
    def angular_nodes(self) -> tuple[float, ...]:
        q = self.angular_count
        return tuple(-math.pi + 2 * math.pi * k / q for k in range(q))

    def require_support(self, jmax: int) -> None:
        """Modes through jmax integrate exactly only on a big enough grid."""
        radial_need = jmax + 1
        if self.rule.order < radial_need:
            raise ValueError(
                f"radial order {self.rule.order} insufficient for jmax={jmax}; "
                f"need at least {radial_need}"
            )
        if self.angular_count <= 2 * jmax:
            raise ValueError(
                f"{self.angular_count} angular nodes insufficient for jmax={jmax}; "
                f"need more than {2 * jmax}"
            )


@dataclass
class Field2D:
    """Complex samples on a polar grid, radial-major: values[k, q]."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self):
        expected = (self.grid.rule.order, self.grid.angular_count)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != expected:
            raise ValueError(
                f"sample array has shape {self.values.shape}, grid wants {expected}"
            )


@dataclass
class ModeCoefficients:
    """Sparse complex amplitudes per mode, truncated at jmax."""

    coeffs: dict[ModeIndex, complex]
    jmax: int

    def __post_init__(self):
        clean: dict[ModeIndex, complex] = {}
        for idx, amp in self.coeffs.items():
            idx = _check_mode(ModeIndex(*idx))
            if idx.j > self.jmax:
                raise ValueError(f"mode {tuple(idx)} exceeds jmax={self.jmax}")
            if amp:
                clean[idx] = complex(amp)
        self.coeffs = clean

    def get(self, j: int, m: int) -> complex:
        return self.coeffs.get(ModeIndex(j, m), 0j)

    def power(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.coeffs.values())

    def max_abs_diff(self, other: "ModeCoefficients") -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max(
            (abs(self.coeffs.get(k, 0j) - other.coeffs.get(k, 0j)) for k in keys),
            default=0.0,
        )

    def sorted_items(self) -> list[tuple[ModeIndex, complex]]:
        return sorted(self.coeffs.items())


def radial_carrier(idx: ModeIndex) -> Carrier:
    idx = _check_mode(idx)
    return carrier_L(idx.j, idx.m)


def eval_Z(idx: ModeIndex, r: float, phi: float) -> complex:
    """Mode value at polar point (r, phi)."""
    idx = _check_mode(ModeIndex(*idx))
    if r < 0:
        raise ValueError(f"r must be non-negative (got {r})")
    return cmath.exp(1j * idx.m * phi) * evaluate(radial_carrier(idx), r * r)


def radial_de_residual(idx: ModeIndex, r: float) -> float:
    """Residual of the radial equation at r > 0.

    Applies d^2/dr^2 + (1/r) d/dr - 4 m^2/r^2 - r^2 + 4(j + 1/2) to the
    radial profile through exact chain-rule derivatives of the carrier in
    x = r**2; the result is rounding-level, not truncation-level.
    """
    idx = _check_mode(ModeIndex(*idx))
    if r <= 0:
        raise ValueError(f"r must be positive (got {r})")
    c = radial_carrier(idx)
    x = r * r
    g = evaluate(c, x)
    g1 = evaluate_derivative(c, x, 1)
    g2 = evaluate_derivative(c, x, 2)
    # d/dr = 2r d/dx, d^2/dr^2 = 2 d/dx + 4 r^2 d^2/dx^2.
    second = 2 * g1 + 4 * x * g2
    first_over_r = 2 * g1
    return second + first_over_r - (4 * idx.m**2 / x) * g - x * g + 4 * (idx.j + 0.5) * g


def radial_de_scale(idx: ModeIndex, r: float) -> float:
    """Largest magnitude among the residual's contributing terms."""
    idx = _check_mode(ModeIndex(*idx))
    c = radial_carrier(idx)
    x = r * r
    g = evaluate(c, x)
    g1 = evaluate_derivative(c, x, 1)
    g2 = evaluate_derivative(c, x, 2)
    terms = (
        abs(2 * g1 + 4 * x * g2),
        abs(2 * g1),
        abs(4 * idx.m**2 / x * g),
        abs(x * g),
        abs(4 * (idx.j + 0.5) * g),
    )
    return max(terms)


def _radial_values(idx: ModeIndex, grid: PolarGrid) -> np.ndarray:
    c = radial_carrier(idx)
    scale = c.norm_factor()
    return np.array(
        [scale * x ** (c.half_power / 2) * c.core.eval_float(x) for x in grid.radial_x]
    )


def inner_product_2d(idxA: ModeIndex, idxB: ModeIndex, grid: PolarGrid) -> complex:
    """Discretized plane inner product of two modes (conjugate on the first)."""
    idxA = _check_mode(ModeIndex(*idxA))
    idxB = _check_mode(ModeIndex(*idxB))
    grid.require_support(max(idxA.j, idxB.j))
    d = idxB.m - idxA.m
    angular = sum(cmath.exp(1j * d * phi) for phi in grid.angular_nodes) / grid.angular_count
    # The exp(-x/2) factors pair into the rule's exp(-x) weight, so the
    # radial sum is the exact polynomial integral.
    ya = _radial_values(idxA, grid)
    yb = _radial_values(idxB, grid)
    radial = math.fsum(w * a * b for w, a, b in zip(grid.radial_weights, ya, yb))
    return angular * radial


def gram_2d(jmax: int, grid: PolarGrid) -> np.ndarray:
    """Gram matrix of all modes through jmax; should be the identity.

    Radial node values are computed once per mode and combined with the
    exact angular averages, which is the same double sum as the pairwise
    inner product, just batched.
    """
    grid.require_support(jmax)
    modes = modes_up_to(jmax)
    q = grid.angular_count
    values = np.vstack([_radial_values(idx, grid) for idx in modes])
    w = np.array(grid.radial_weights)
    radial = (values * w) @ values.T
    phis = np.array(grid.angular_nodes)
    span = 2 * jmax
    angular = {
        d: complex(np.sum(np.exp(1j * d * phis)) / q) for d in range(-span, span + 1)
    }
    gram = np.empty((len(modes), len(modes)), dtype=complex)
    for a, ia in enumerate(modes):
        for b, ib in enumerate(modes):
            gram[a, b] = angular[ib.m - ia.m] * radial[a, b]
    return gram


def decompose(fld: Field2D, jmax: int) -> ModeCoefficients:
    """Mode amplitudes of a sampled field through jmax.

    Angular part by direct discrete Fourier summation over the uniform
    angle nodes, radial part by the half-line rule in x = r**2.
    """
    grid = fld.grid
    grid.require_support(jmax)
    q = grid.angular_count
    phis = np.array(grid.angular_nodes)
    x = np.array(grid.radial_x)
    # Half of the rule's exp(-x) weight cancels the mode's own exponential;
    # the other half belongs to the sampled field.
    w = np.array(grid.radial_weights) * np.exp(x / 2)
    coeffs: dict[ModeIndex, complex] = {}
    fourier: dict[int, np.ndarray] = {}
    for m in range(-jmax, jmax + 1):
        fourier[m] = fld.values @ np.exp(-1j * m * phis) / q
    for idx in modes_up_to(jmax):
        radial = _radial_values(idx, grid)
        coeffs[idx] = complex(np.dot(w * radial, fourier[idx.m]))
    return ModeCoefficients(coeffs=coeffs, jmax=jmax)


def reconstruct(coeffs: ModeCoefficients, grid: PolarGrid) -> Field2D:
    """Sample the mode sum on the grid; inverse of decompose on its span."""
    values = np.zeros((grid.rule.order, grid.angular_count), dtype=complex)
    phis = np.array(grid.angular_nodes)
    damp = np.exp(-np.array(grid.radial_x) / 2)
    for idx, amp in coeffs.sorted_items():
        radial = _radial_values(idx, grid) * damp
        values += amp * np.outer(radial, np.exp(1j * idx.m * phis))
    return Field2D(grid=grid, values=values)


_MODE_OPERATORS = (OperatorName.Jplus, OperatorName.Jminus, OperatorName.J3)


def _mode_step(op: OperatorName, idx: ModeIndex) -> tuple[ModeIndex, SqrtSum] | None:
    """Exact single-mode action; None when annihilated."""
    j, m = idx
    if op is OperatorName.J3:
        return (idx, SqrtSum.of(m)) if m else None
    if op is OperatorName.Jplus:
        radicand = (j - m) * (j + m + 1)
        return (ModeIndex(j, m + 1), SqrtSum.sqrt(radicand)) if radicand else None
    if op is OperatorName.Jminus:
        radicand = (j + m) * (j - m + 1)
        return (ModeIndex(j, m - 1), SqrtSum.sqrt(radicand)) if radicand else None
    raise ValueError(f"operator {op.value} does not act on mode amplitudes")


def apply_mode_operator(op: OperatorName, coeffs: ModeCoefficients) -> ModeCoefficients:
    """Phase-dressed ladder action on amplitudes.

    The diagonal operator scales by m; the shifts move m by one with the
    spin matrix element, annihilating at the band edges.
    """
    if op not in _MODE_OPERATORS:
        raise ValueError(f"operator {op.value} does not act on mode amplitudes")
    out: dict[ModeIndex, complex] = {}
    for idx, amp in coeffs.coeffs.items():
        step = _mode_step(op, idx)
        if step is None:
            continue
        target, elem = step
        out[target] = out.get(target, 0j) + amp * float(elem)
    return ModeCoefficients(coeffs=out, jmax=coeffs.jmax)


def mode_casimir(coeffs: ModeCoefficients) -> ModeCoefficients:
    """Diagonal squared plus half the ladder anticommutator, exactly.

    Composed from the elementary steps with exact element products (each
    path squares one matrix element, so the radicands collapse to
    integers); single modes scale by exactly j(j+1).
    """
    out: dict[ModeIndex, complex] = {}
    for idx, amp in coeffs.coeffs.items():
        total = SqrtSum.of(Fraction(idx.m * idx.m))
        for first, second in (
            (OperatorName.Jminus, OperatorName.Jplus),
            (OperatorName.Jplus, OperatorName.Jminus),
        ):
            step1 = _mode_step(first, idx)
            if step1 is None:
                continue
            mid, elem1 = step1
            step2 = _mode_step(second, mid)
            if step2 is None:
                continue
            target, elem2 = step2
            assert target == idx
            total = total + Fraction(1, 2) * (elem1 * elem2)
        if total:
            out[idx] = amp * float(total)
    return ModeCoefficients(coeffs=out, jmax=coeffs.jmax)


def mode_commutator(
    opA: OperatorName, opB: OperatorName, coeffs: ModeCoefficients
) -> ModeCoefficients:
    """(opA opB - opB opA) on amplitudes with exact element products.

    Matrix elements multiply in the exact radical ring before any float
    conversion, so the spin commutators hold bit-exactly on amplitudes.
    """
    if opA not in _MODE_OPERATORS or opB not in _MODE_OPERATORS:
        raise ValueError("mode commutators are defined for the spin ladder operators")
    out: dict[ModeIndex, complex] = {}
    for idx, amp in coeffs.coeffs.items():
        exact: dict[ModeIndex, SqrtSum] = {}
        for first, second, sign in ((opB, opA, 1), (opA, opB, -1)):
            step1 = _mode_step(first, idx)
            if step1 is None:
                continue
            mid, elem1 = step1
            step2 = _mode_step(second, mid)
            if step2 is None:
                continue
            target, elem2 = step2
            contrib = elem1 * elem2 * sign
            exact[target] = exact.get(target, SqrtSum.of(0)) + contrib
        for target, value in exact.items():
            if value:
                out[target] = out.get(target, 0j) + amp * float(value)
    return ModeCoefficients(coeffs=out, jmax=coeffs.jmax)
