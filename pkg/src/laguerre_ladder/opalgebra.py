"""Ladder-operator realizations on the two-label basis.

Sixteen named generators plus the auxiliary position, derivative, number
and second-order equation operators, in two realizations:

* exact shift actions on label vectors, with matrix elements kept in the
  exact radical ring so commutators and Casimir eigenvalues that are
  rational come out rational, and
* first-order differential forms acting pointwise on carriers.

The label action is ground truth; differential forms are checked against
it.  The quadratic composites (the double-raising and double-lowering
families) are never given independent matrix elements: they are always
composed from the single-step actions through their commutator
definitions.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Literal, Mapping, Sequence

import numpy as np

from .basis import BasisIndex, Carrier, carrier_M, derived_core, evaluate, evaluate_derivative
from .exactpoly import LaurentPoly
from .radicals import SqrtSum


class OperatorName(Enum):
    Aplus = "a+"
    Aminus = "a-"
    Bplus = "b+"
    Bminus = "b-"
    Jplus = "J+"
    Jminus = "J-"
    J3 = "J3"
    Kplus = "K+"
    Kminus = "K-"
    K3 = "K3"
    Rplus = "R+"
    Rminus = "R-"
    R3 = "R3"
    Splus = "S+"
    Sminus = "S-"
    S3 = "S3"
    X = "X"
    Dx = "Dx"
    N = "N"
    P = "P"
    E = "E"


ExactVector = dict[BasisIndex, SqrtSum]

# Composite generators: (sign, first, second) meaning sign * [first, second].
_COMMUTATOR_COMPOSITES = {
    OperatorName.Rplus: (1, OperatorName.Jplus, OperatorName.Kplus),
    OperatorName.Rminus: (-1, OperatorName.Jminus, OperatorName.Kminus),
    OperatorName.Splus: (1, OperatorName.Jminus, OperatorName.Kplus),
    OperatorName.Sminus: (-1, OperatorName.Jplus, OperatorName.Kminus),
}

# Test fixture: a deliberately wrong matrix element, used to prove the
# verification suites actually detect broken algebra.  "jplus-sign" flips
# the sign of the single J+ element out of the state (1, 2).
_VALID_DEFECTS = ("jplus-sign",)
_injected_defect: str | None = None


def set_injected_defect(name: str | None) -> None:
    global _injected_defect
    if name is not None and name not in _VALID_DEFECTS:
        raise ValueError(f"unknown defect {name!r}; valid: {_VALID_DEFECTS}")
    _injected_defect = name


@contextmanager
def injected_defect(name: str | None):
    previous = _injected_defect
    set_injected_defect(name)
    try:
        yield
    finally:
        set_injected_defect(previous)


def _diagonal(op: OperatorName, n: int, p: int) -> Fraction | None:
    if op is OperatorName.N:
        return Fraction(n)
    if op is OperatorName.P:
        return Fraction(p)
    if op is OperatorName.J3:
        return Fraction(n - p, 2)
    if op is OperatorName.K3:
        return Fraction(n + p + 1, 2)
    if op is OperatorName.R3:
        return Fraction(2 * n + 1, 2)
    if op is OperatorName.S3:
        return Fraction(2 * p + 1, 2)
    return None


def _terms(op: OperatorName, n: int, p: int) -> list[tuple[BasisIndex, SqrtSum]]:
    """Exact matrix elements of op applied to the basis state (n, p)."""
    diag = _diagonal(op, n, p)
    if diag is not None:
        return [(BasisIndex(n, p), SqrtSum.of(diag))] if diag else []
    if op is OperatorName.E:
        return []
    if op is OperatorName.Aplus:
        return [(BasisIndex(n + 1, p), SqrtSum.sqrt(n + 1))]
    if op is OperatorName.Aminus:
        return [] if n == 0 else [(BasisIndex(n - 1, p), SqrtSum.sqrt(n))]
    if op is OperatorName.Bplus:
        return [(BasisIndex(n, p + 1), SqrtSum.sqrt(p + 1))]
    if op is OperatorName.Bminus:
        return [] if p == 0 else [(BasisIndex(n, p - 1), SqrtSum.sqrt(p))]
    if op is OperatorName.Jplus:
        if p == 0:
            return []
        elem = SqrtSum.sqrt((n + 1) * p)
        if _injected_defect == "jplus-sign" and (n, p) == (1, 2):
            elem = -elem
        return [(BasisIndex(n + 1, p - 1), elem)]
    if op is OperatorName.Jminus:
        return [] if n == 0 else [(BasisIndex(n - 1, p + 1), SqrtSum.sqrt(n * (p + 1)))]
    if op is OperatorName.Kplus:
        return [(BasisIndex(n + 1, p + 1), SqrtSum.sqrt((n + 1) * (p + 1)))]
    if op is OperatorName.Kminus:
        return [] if n == 0 or p == 0 else [(BasisIndex(n - 1, p - 1), SqrtSum.sqrt(n * p))]
    if op in _COMMUTATOR_COMPOSITES:
        sign, first, second = _COMMUTATOR_COMPOSITES[op]
        vec = {BasisIndex(n, p): SqrtSum.of(sign)}
        return list(commutator_exact(first, second, vec).items())
    if op is OperatorName.X:
        # X = (N + P + 1) - K+ - K- as an exact operator identity.
        vec = {BasisIndex(n, p): SqrtSum.of(1)}
        out = _scale_exact(apply_exact(OperatorName.Kplus, vec), Fraction(-1))
        _accumulate(out, _scale_exact(apply_exact(OperatorName.Kminus, vec), Fraction(-1)))
        _accumulate(out, {BasisIndex(n, p): SqrtSum.of(n + p + 1)})
        return [(k, v) for k, v in out.items() if v]
    raise ValueError(f"operator {op.value} has no label-space action")


def _accumulate(target: ExactVector, source: Mapping[BasisIndex, SqrtSum]) -> None:
    for key, val in source.items():
        cur = target.get(key)
        target[key] = val if cur is None else cur + val


def _scale_exact(vec: ExactVector, s) -> ExactVector:
    return {k: v * s for k, v in vec.items()}


def _prune(vec: ExactVector) -> ExactVector:
    return {k: v for k, v in vec.items() if v}


def apply_exact(op: OperatorName, vec: Mapping[BasisIndex, SqrtSum]) -> ExactVector:
    """Exact label action on a vector with radical coefficients."""
    out: ExactVector = {}
    for (n, p), coeff in vec.items():
        for target, elem in _terms(op, n, p):
            _accumulate(out, {target: coeff * elem})
    return _prune(out)


def commutator_exact(
    opA: OperatorName, opB: OperatorName, vec: Mapping[BasisIndex, SqrtSum]
) -> ExactVector:
    """(opA opB - opB opA) applied exactly."""
    ab = apply_exact(opA, apply_exact(opB, vec))
    ba = apply_exact(opB, apply_exact(opA, vec))
    out = dict(ab)
    _accumulate(out, _scale_exact(ba, Fraction(-1)))
    return _prune(out)


def exact_state(n: int, p: int) -> ExactVector:
    return {BasisIndex(n, p): SqrtSum.of(1)}


# ---------------------------------------------------------------------------
# Public floating-point label vectors
# ---------------------------------------------------------------------------


@dataclass
class LabelVector:
    """Finite linear combination of basis labels with real coefficients."""

    terms: dict[BasisIndex, float]

    def __post_init__(self):
        self.terms = {BasisIndex(*k): float(v) for k, v in self.terms.items() if v}

    @staticmethod
    def basis_state(n: int, p: int) -> "LabelVector":
        return LabelVector({BasisIndex(n, p): 1.0})

    def __add__(self, other: "LabelVector") -> "LabelVector":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return LabelVector(out)

    def __sub__(self, other: "LabelVector") -> "LabelVector":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) - v
        return LabelVector(out)

    def __mul__(self, s: float) -> "LabelVector":
        return LabelVector({k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def get(self, n: int, p: int) -> float:
        return self.terms.get(BasisIndex(n, p), 0.0)

    def max_abs_diff(self, other: "LabelVector") -> float:
        keys = set(self.terms) | set(other.terms)
        return max(
            (abs(self.terms.get(k, 0.0) - other.terms.get(k, 0.0)) for k in keys),
            default=0.0,
        )

    def is_zero(self) -> bool:
        return not self.terms


def apply_label(op: OperatorName, v: LabelVector) -> LabelVector:
    """Matrix-element action of op; boundary labels annihilate cleanly."""
    out: dict[BasisIndex, float] = {}
    for (n, p), coeff in v.terms.items():
        for target, elem in _terms(op, n, p):
            out[target] = out.get(target, 0.0) + coeff * float(elem)
    return LabelVector(out)


def commutator_label(opA: OperatorName, opB: OperatorName, v: LabelVector) -> LabelVector:
    """(opA opB - opB opA) applied to v.

    Computed through the exact channel (float coefficients are exact
    rationals, so the lift is faithful) and converted back at the end;
    rational-valued commutators therefore come out bit-exact.
    """
    lifted = {k: SqrtSum.of(Fraction(c)) for k, c in v.terms.items()}
    result = commutator_exact(opA, opB, lifted)
    return LabelVector({k: float(val) for k, val in result.items()})


def twisted_swap(v: LabelVector) -> LabelVector:
    """Label swap with the alternating sign of the basis symmetry.

    Sends the state (n, p) to (-1)**(p-n) times (p, n); it squares to the
    identity and realizes the n <-> p interchange at the function level.
    """
    out: dict[BasisIndex, float] = {}
    for (n, p), coeff in v.terms.items():
        sign = -1.0 if (p - n) % 2 else 1.0
        key = BasisIndex(p, n)
        out[key] = out.get(key, 0.0) + sign * coeff
    return LabelVector(out)


# ---------------------------------------------------------------------------
# Casimir operators
# ---------------------------------------------------------------------------

CasimirName = Literal["Cp", "Csu2", "Csu11", "CR", "CS"]

_CASIMIR_PARTS: dict[str, tuple[OperatorName, OperatorName, OperatorName, int]] = {
    # name -> (diagonal generator, plus, minus, sign of the anticommutator half)
    "Csu2": (OperatorName.J3, OperatorName.Jplus, OperatorName.Jminus, +1),
    "Csu11": (OperatorName.K3, OperatorName.Kplus, OperatorName.Kminus, -1),
    "CR": (OperatorName.R3, OperatorName.Rplus, OperatorName.Rminus, -1),
    "CS": (OperatorName.S3, OperatorName.Splus, OperatorName.Sminus, -1),
}


def casimir_eigenvalue(which: CasimirName, idx: tuple[int, int]) -> Fraction:
    """Exact Casimir eigenvalue on a single basis state.

    Built from label actions only.  Raises if the state fails to be an exact
    eigenvector (which would indicate broken matrix elements).
    """
    n, p = idx
    state = exact_state(n, p)
    acc: ExactVector = {}
    if which == "Cp":
        _accumulate(acc, apply_exact(OperatorName.Bminus, apply_exact(OperatorName.Bplus, state)))
        _accumulate(acc, apply_exact(OperatorName.Bplus, apply_exact(OperatorName.Bminus, state)))
        _accumulate(acc, _scale_exact(state, Fraction(-(2 * p + 1))))
    elif which in _CASIMIR_PARTS:
        diag, plus, minus, sign = _CASIMIR_PARTS[which]
        _accumulate(acc, apply_exact(diag, apply_exact(diag, state)))
        half = Fraction(sign, 2)
        _accumulate(acc, _scale_exact(apply_exact(plus, apply_exact(minus, state)), half))
        _accumulate(acc, _scale_exact(apply_exact(minus, apply_exact(plus, state)), half))
    else:
        raise ValueError(f"unknown Casimir {which!r}")
    acc = _prune(acc)
    key = BasisIndex(n, p)
    for label, coeff in acc.items():
        if label != key:
            raise RuntimeError(
                f"Casimir {which} is not diagonal on {idx}: leakage onto {tuple(label)}"
            )
    value = acc.get(key, SqrtSum.of(0))
    if not value.is_rational():
        raise RuntimeError(f"Casimir {which} eigenvalue on {idx} is not rational: {value!r}")
    return value.as_fraction()


# ---------------------------------------------------------------------------
# Second-order equation operator, exact symbolic annihilation
# ---------------------------------------------------------------------------


def e_residual_symbolic(n: int, p: int) -> LaurentPoly:
    """Apply the second-order equation operator to the carrier symbolically.

    Works on the unnormalized form x**(k/2) exp(-x/2) core; the common outer
    factor is dropped and the remaining Laurent polynomial returned.  It is
    exactly zero for every valid label pair.
    """
    c = carrier_M(n, p)
    q = c.core
    k = c.half_power
    q1 = derived_core(k, q)
    q2 = derived_core(k, q1)
    return (
        q2.shift(1)
        + q1
        + Fraction(n + p + 1, 2) * q
        - Fraction((p - n) ** 2, 4) * q.shift(-1)
        - Fraction(1, 4) * q.shift(1)
    )


# ---------------------------------------------------------------------------
# First-order differential realizations
# ---------------------------------------------------------------------------

_DIFF_SUPPORTED = {
    OperatorName.Bplus,
    OperatorName.Bminus,
    OperatorName.Jplus,
    OperatorName.Jminus,
    OperatorName.Kplus,
    OperatorName.Kminus,
    OperatorName.J3,
    OperatorName.K3,
    OperatorName.R3,
    OperatorName.S3,
    OperatorName.N,
    OperatorName.P,
    OperatorName.X,
    OperatorName.Dx,
    OperatorName.E,
}


def apply_diff(op: OperatorName, c: Carrier, x: float) -> float:
    """Evaluate the published differential form of op on a carrier at x > 0.

    The number operators are replaced by the eigenvalues of the carrier's
    label.  The pure raising/lowering bosons acting on the first label and
    the quadratic composites have no first-order form here and raise.
    """
    if op not in _DIFF_SUPPORTED:
        raise ValueError(
            f"operator {op.value} has no supported differential form; "
            "use the label-space action"
        )
    if x <= 0:
        raise ValueError(f"x must be positive (got {x})")
    if c.label is None:
        raise ValueError("carrier has no label; differential forms need eigenvalues")
    n, p = c.label

    diag = _diagonal(op, n, p)
    if diag is not None:
        return float(diag) * evaluate(c, x)

    f = evaluate(c, x)
    if op is OperatorName.X:
        return x * f
    f1 = evaluate_derivative(c, x, 1)
    if op is OperatorName.Dx:
        return f1
    root = math.sqrt(x)
    if op is OperatorName.Bplus:
        return -root * f1 + (root / 2 + (p - n) / (2 * root)) * f
    if op is OperatorName.Bminus:
        return root * f1 + (root / 2 + (p - n) / (2 * root)) * f
    if op is OperatorName.Jplus:
        d = n - p + 1
        return -d * f1 + (d * (n - p) / (2 * x)) * f - ((n + p + 1) / 2) * f
    if op is OperatorName.Jminus:
        d = n - p - 1
        return d * f1 + (d * (n - p) / (2 * x)) * f - ((n + p + 1) / 2) * f
    if op is OperatorName.Kplus:
        return x * f1 + ((n + p + 2 - x) / 2) * f
    if op is OperatorName.Kminus:
        return -x * f1 + ((n + p - x) / 2) * f
    # Second-order equation operator.
    f2 = evaluate_derivative(c, x, 2)
    return x * f2 + f1 + ((n + p + 1) / 2) * f - ((p - n) ** 2 / (4 * x)) * f - (x / 4) * f


# ---------------------------------------------------------------------------
# Derived structure constants and the Killing-form Casimir
# ---------------------------------------------------------------------------

SO32_GENERATORS: tuple[OperatorName, ...] = (
    OperatorName.Jplus,
    OperatorName.Jminus,
    OperatorName.J3,
    OperatorName.Kplus,
    OperatorName.Kminus,
    OperatorName.K3,
    OperatorName.Rplus,
    OperatorName.Rminus,
    OperatorName.Splus,
    OperatorName.Sminus,
)


@dataclass
class StructureConstants:
    """Expansion of every commutator over the ten closing generators.

    ``table[a, b, c]`` is the coefficient of generator c in [X_a, X_b].
    ``residual_flag`` is set when some commutator failed to close within
    tolerance; ``worst_pair`` names the offender.
    """

    generators: tuple[OperatorName, ...]
    table: np.ndarray
    max_fit_residual: float
    worst_pair: tuple[OperatorName, OperatorName]
    residual_flag: bool
    fit_tolerance: float
    sample_states: tuple[BasisIndex, ...] = ()

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.table + np.swapaxes(self.table, 0, 1))))

    def jacobi_residual(self) -> float:
        t = self.table
        total = (
            np.einsum("bcd,ade->abce", t, t)
            + np.einsum("cad,bde->abce", t, t)
            + np.einsum("abd,cde->abce", t, t)
        )
        return float(np.max(np.abs(total)))


def default_sample_states() -> tuple[BasisIndex, ...]:
    """Twelve interior states, away from annihilation boundaries."""
    return tuple(
        BasisIndex(n, p)
        for n, p in [
            (2, 2), (2, 3), (2, 4), (2, 5),
            (3, 2), (3, 3), (3, 4),
            (4, 2), (4, 3), (4, 4),
            (5, 3), (5, 5),
        ]
    )


def _float_vec(vec: ExactVector) -> dict[BasisIndex, float]:
    return {k: float(v) for k, v in vec.items()}


def derive_structure_constants(
    sample_states: Sequence[tuple[int, int]] | None = None,
    tolerance: float = 1e-9,
) -> StructureConstants:
    """Fit every commutator of the ten generators over the generator basis.

    Least squares over the sample states; each commutator's action must be
    reproduced by a fixed linear combination of single-generator actions.
    The fit is overdetermined by construction (the residual flag reports any
    failure to close rather than hiding it).
    """
    states = [BasisIndex(*s) for s in (sample_states or default_sample_states())]
    if len(set(states)) < 12:
        raise ValueError(f"need at least 12 distinct sample states (got {len(set(states))})")
    if any(n < 0 or p < 0 for n, p in states):
        raise ValueError("sample states must have non-negative labels")

    gens = SO32_GENERATORS
    images = {
        (gi, s): _float_vec(apply_exact(g, exact_state(*s)))
        for gi, g in enumerate(gens)
        for s in states
    }
    base_labels = {s: sorted({k for gi in range(len(gens)) for k in images[(gi, s)]})
                   for s in states}

    # The design matrix is pair-independent; check solvability once.
    rows = []
    for s in states:
        for label in base_labels[s]:
            rows.append([images[(gi, s)].get(label, 0.0) for gi in range(len(gens))])
    design = np.array(rows)
    if np.linalg.matrix_rank(design) < len(gens):
        raise ValueError("sample states underdetermine the generator expansion")

    dim = len(gens)
    table = np.zeros((dim, dim, dim))
    max_res = 0.0
    worst = (gens[0], gens[1])
    for a in range(dim):
        for b in range(a + 1, dim):
            comm = {
                s: _float_vec(commutator_exact(gens[a], gens[b], exact_state(*s)))
                for s in states
            }
            mat_rows = []
            rhs = []
            for s in states:
                labels = sorted(set(base_labels[s]) | set(comm[s]))
                for label in labels:
                    mat_rows.append([images[(gi, s)].get(label, 0.0) for gi in range(dim)])
                    rhs.append(comm[s].get(label, 0.0))
            mat = np.array(mat_rows)
            vec = np.array(rhs)
            coeffs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
            residual = float(np.max(np.abs(mat @ coeffs - vec))) if len(vec) else 0.0
            if residual > max_res:
                max_res = residual
                worst = (gens[a], gens[b])
            table[a, b] = coeffs
            table[b, a] = -coeffs
    return StructureConstants(
        generators=gens,
        table=table,
        max_fit_residual=max_res,
        worst_pair=worst,
        residual_flag=max_res > tolerance,
        fit_tolerance=tolerance,
        sample_states=tuple(states),
    )


def killing_form(sc: StructureConstants) -> np.ndarray:
    """B_ab = sum_cd f_ac^d f_bd^c from the derived constants."""
    t = sc.table
    return np.einsum("acd,bdc->ab", t, t)


def su2_block_scale(sc: StructureConstants) -> tuple[float, float]:
    """Proportionality factor of the su(2) subblock of the Killing form.

    Returns (scale, residual): the block should equal scale times the
    standard su(2) Killing form (diagonal entry 2, off-diagonal pairing 4).
    """
    B = killing_form(sc)
    gens = list(sc.generators)
    i3 = gens.index(OperatorName.J3)
    ip = gens.index(OperatorName.Jplus)
    im = gens.index(OperatorName.Jminus)
    scale = B[i3, i3] / 2.0
    reference = np.zeros((3, 3))
    reference[0, 0] = 2.0
    reference[1, 2] = reference[2, 1] = 4.0
    block = np.array(
        [
            [B[i3, i3], B[i3, ip], B[i3, im]],
            [B[ip, i3], B[ip, ip], B[ip, im]],
            [B[im, i3], B[im, ip], B[im, im]],
        ]
    )
    residual = float(np.max(np.abs(block - scale * reference)))
    return float(scale), residual


def killing_casimir(sc: StructureConstants, idx: tuple[int, int], tol: float = 1e-10) -> float:
    """Eigenvalue of the quadratic Casimir built from the inverse Killing form.

    The bilinear form is rescaled so its su(2) subblock reproduces the
    standard spin Casimir j(j+1); the eigenvalue is reported in that
    normalization.  Raises when the form is singular or the state is not an
    eigenvector.
    """
    if sc.residual_flag:
        raise ValueError("structure constants carry a closure-failure flag")
    B = killing_form(sc)
    if np.linalg.cond(B) > 1e8:
        raise RuntimeError("Killing form is numerically singular")
    scale, _ = su2_block_scale(sc)
    if abs(scale) < 1e-9:
        raise RuntimeError("degenerate su(2) block in the Killing form")
    ginv = np.linalg.inv(B / (2.0 * scale))

    n, p = idx
    key = BasisIndex(n, p)
    gens = sc.generators
    acc: dict[BasisIndex, float] = {}
    for b, gen_b in enumerate(gens):
        vb = _float_vec(apply_exact(gen_b, exact_state(n, p)))
        for a, gen_a in enumerate(gens):
            if ginv[a, b] == 0.0:
                continue
            for (nn, pp), coeff in vb.items():
                for target, elem in _terms(gen_a, nn, pp):
                    acc[target] = acc.get(target, 0.0) + ginv[a, b] * coeff * float(elem)
    eigen = acc.pop(key, 0.0)
    leak = max((abs(v) for v in acc.values()), default=0.0)
    if leak > tol * max(1.0, abs(eigen)):
        raise RuntimeError(f"Killing Casimir is not diagonal on {idx}: leakage {leak:.3e}")
    return eigen
