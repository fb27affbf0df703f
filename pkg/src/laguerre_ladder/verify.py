"""Machine-checkable identity suites with a structured report.

Every suite returns an ordered mapping from identity name to a check
record: computation mode ("exact" checks must come out identically zero,
"float" checks carry a tolerance), the worst residual observed, and a
pass flag.  The command-line front end renders the combined report as
JSON and turns any failure into a nonzero exit code.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping

import numpy as np

from . import basis, exactpoly, opalgebra, plane, quadrature
from .basis import BasisIndex, carrier_M
from .opalgebra import OperatorName as Op
from .radicals import SqrtSum

WORKERS_ENV = "LAGUERRE_LADDER_WORKERS"

SUITE_NAMES = ("exact", "algebra", "quadrature", "plane", "so32")


def _exact_check(residual: float) -> dict:
    return {
        "mode": "exact",
        "max_residual": residual,
        "tolerance": 0.0,
        "pass": residual == 0.0,
    }


def _float_check(residual: float, tolerance: float) -> dict:
    residual = float(residual)
    return {
        "mode": "float",
        "max_residual": residual,
        "tolerance": tolerance,
        "pass": bool(residual <= tolerance),
    }


def _poly_residual(p: exactpoly.LaurentPoly) -> float:
    return float(p.max_abs_coefficient())


def _vec_residual(actual: Mapping, expected: Mapping) -> float:
    keys = set(actual) | set(expected)
    worst = 0.0
    for k in keys:
        diff = actual.get(k, SqrtSum.of(0)) - expected.get(k, SqrtSum.of(0))
        worst = max(worst, abs(float(diff)))
    return worst


# ---------------------------------------------------------------------------
# exact suite: polynomial identities
# ---------------------------------------------------------------------------


def suite_exact(nmax: int = 12, alpha_max: int = 10) -> dict:
    checks: dict[str, dict] = {}

    worst = 0.0
    for n in range(nmax + 1):
        for a in range(-n, alpha_max + 1):
            worst = max(worst, _poly_residual(exactpoly.de_residual(n, a)))
    checks["defining-de-residual"] = _exact_check(worst)

    worst_up = worst_down = 0.0
    for n in range(nmax + 1):
        for a in range(1 - n, alpha_max + 1):
            up, down = exactpoly.alpha_ladder_check(n, a)
            worst_up = max(worst_up, _poly_residual(up))
            worst_down = max(worst_down, _poly_residual(down))
    checks["ladder-raise-residual"] = _exact_check(worst_up)
    checks["ladder-lower-residual"] = _exact_check(worst_down)

    worst = 0.0
    for n in range(1, nmax + 1):
        for a in range(1 - n, alpha_max + 1):
            worst = max(worst, _poly_residual(exactpoly.three_term_residual(n, a)))
    checks["three-term-recurrence"] = _exact_check(worst)

    worst = 0.0
    for n in range(min(nmax, 20) + 1):
        for a in range(n + 1):
            sign = -1 if a % 2 else 1
            lhs = exactpoly.laguerre(n, -a)
            rhs = (sign * Fraction(factorial(n - a), factorial(n))) * exactpoly.laguerre(
                n - a, a
            ).shift(a)
            worst = max(worst, _poly_residual(lhs - rhs))
    checks["negative-parameter-identity"] = _exact_check(worst)

    worst = 0.0
    for n in range(nmax + 1):
        for p in range(nmax + 1):
            worst = max(worst, _poly_residual(opalgebra.e_residual_symbolic(n, p)))
    checks["equation-operator-annihilation"] = _exact_check(worst)

    worst = 0.0
    for n in range(nmax + 1):
        for p in range(nmax + 1):
            a, b = carrier_M(n, p), carrier_M(p, n)
            same = (
                a.norm_squared == b.norm_squared
                and a.half_power == b.half_power
                and a.core == b.core
                and a.sign == (-1 if (p - n) % 2 else 1) * b.sign
            )
            if not same:
                worst = 1.0
    checks["carrier-swap-symmetry"] = _exact_check(worst)
    return checks


# ---------------------------------------------------------------------------
# algebra suite: label-space commutators, Casimirs, differential consistency
# ---------------------------------------------------------------------------


def _commutator_residual(
    pairs: list[tuple[Op, Op, Callable]], states: list[BasisIndex]
) -> float:
    """pairs hold (opA, opB, expected(state) -> exact vector)."""
    worst = 0.0
    for s in states:
        vec = opalgebra.exact_state(*s)
        for op_a, op_b, expected in pairs:
            actual = opalgebra.commutator_exact(op_a, op_b, vec)
            worst = max(worst, _vec_residual(actual, expected(s)))
    return worst


def _scaled_apply(op: Op, s: BasisIndex, factor) -> dict:
    vec = opalgebra.apply_exact(op, opalgebra.exact_state(*s))
    return {k: v * Fraction(factor) for k, v in vec.items()}


def suite_algebra(nmax: int = 12) -> dict:
    checks: dict[str, dict] = {}
    states = [BasisIndex(n, p) for n in range(nmax + 1) for p in range(nmax + 1)]
    identity = lambda s: {s: SqrtSum.of(1)}
    zero = lambda s: {}

    checks["boson-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.Bminus, Op.Bplus, identity),
                (Op.Aminus, Op.Aplus, identity),
                (Op.Aplus, Op.Bplus, zero),
                (Op.Aplus, Op.Bminus, zero),
                (Op.Aminus, Op.Bplus, zero),
                (Op.Aminus, Op.Bminus, zero),
            ],
            states,
        )
    )
    checks["su2-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.J3, Op.Jplus, lambda s: _scaled_apply(Op.Jplus, s, 1)),
                (Op.J3, Op.Jminus, lambda s: _scaled_apply(Op.Jminus, s, -1)),
                (Op.Jplus, Op.Jminus, lambda s: _scaled_apply(Op.J3, s, 2)),
            ],
            states,
        )
    )
    checks["su11-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.K3, Op.Kplus, lambda s: _scaled_apply(Op.Kplus, s, 1)),
                (Op.K3, Op.Kminus, lambda s: _scaled_apply(Op.Kminus, s, -1)),
                (Op.Kplus, Op.Kminus, lambda s: _scaled_apply(Op.K3, s, -2)),
            ],
            states,
        )
    )
    checks["r-ladder-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.R3, Op.Rplus, lambda s: _scaled_apply(Op.Rplus, s, 2)),
                (Op.R3, Op.Rminus, lambda s: _scaled_apply(Op.Rminus, s, -2)),
                (Op.Rplus, Op.Rminus, lambda s: _scaled_apply(Op.R3, s, -4)),
            ],
            states,
        )
    )
    checks["s-ladder-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.S3, Op.Splus, lambda s: _scaled_apply(Op.Splus, s, 2)),
                (Op.S3, Op.Sminus, lambda s: _scaled_apply(Op.Sminus, s, -2)),
                (Op.Splus, Op.Sminus, lambda s: _scaled_apply(Op.S3, s, -4)),
            ],
            states,
        )
    )
    checks["r-s-cross-commutators"] = _exact_check(
        _commutator_residual(
            [
                (Op.Rplus, Op.Splus, zero),
                (Op.Rplus, Op.Sminus, zero),
                (Op.Rminus, Op.Splus, zero),
                (Op.Rminus, Op.Sminus, zero),
            ],
            states,
        )
    )

    worst = 0.0
    for s in states:
        for op_a, op_b in ((Op.Aplus, Op.Bplus), (Op.Aminus, Op.Bminus)):
            direct = opalgebra.apply_label(op_a, opalgebra.LabelVector.basis_state(*s))
            swapped = opalgebra.twisted_swap(
                opalgebra.apply_label(
                    op_b, opalgebra.twisted_swap(opalgebra.LabelVector.basis_state(*s))
                )
            )
            worst = max(worst, direct.max_abs_diff(-1.0 * swapped))
    checks["interchange-symmetry"] = _exact_check(worst)

    def casimir_residual(which: str, expected) -> float:
        worst = 0.0
        for s in states:
            diff = opalgebra.casimir_eigenvalue(which, s) - expected(s)
            worst = max(worst, abs(float(diff)))
        return worst

    checks["casimir-boson"] = _exact_check(casimir_residual("Cp", lambda s: 0))
    checks["casimir-su2"] = _exact_check(
        casimir_residual(
            "Csu2", lambda s: Fraction(s.n + s.p, 2) * (Fraction(s.n + s.p, 2) + 1)
        )
    )
    checks["casimir-su11"] = _exact_check(
        casimir_residual(
            "Csu11", lambda s: Fraction(s.n - s.p, 2) ** 2 - Fraction(1, 4)
        )
    )
    checks["casimir-r"] = _exact_check(casimir_residual("CR", lambda s: Fraction(-3, 4)))
    checks["casimir-s"] = _exact_check(casimir_residual("CS", lambda s: Fraction(-3, 4)))

    checks["label-diff-consistency"] = _float_check(
        label_diff_consistency(min(nmax, 10)), 1e-9
    )
    return checks


def label_diff_consistency(nmax: int = 10, points: int = 20) -> float:
    """Worst relative gap between the two realizations of the ladder ops.

    For each operator and state the differential form is sampled on
    log-spaced points and compared with the label action expanded in
    carriers; the gap is scaled by the largest sampled magnitude so zero
    crossings do not inflate it.
    """
    xs = np.logspace(math.log10(0.05), math.log10(20.0), points)
    ops = (Op.Bplus, Op.Bminus, Op.Jplus, Op.Jminus, Op.Kplus, Op.Kminus)
    worst = 0.0
    for n in range(nmax + 1):
        for p in range(nmax + 1):
            c = carrier_M(n, p)
            state = opalgebra.LabelVector.basis_state(n, p)
            # Annihilated states make both sides rounding dust; the input
            # carrier's own magnitude keeps the denominator honest there.
            floor = max(abs(basis.evaluate(c, float(x))) for x in xs)
            for op in ops:
                image = opalgebra.apply_label(op, state)
                gaps = []
                scale = floor
                for x in xs:
                    lhs = opalgebra.apply_diff(op, c, float(x))
                    rhs = sum(
                        coeff * basis.evaluate(carrier_M(*label), float(x))
                        for label, coeff in image.terms.items()
                    )
                    gaps.append(abs(lhs - rhs))
                    scale = max(scale, abs(lhs), abs(rhs))
                worst = max(worst, max(gaps) / scale)
    return worst


# ---------------------------------------------------------------------------
# quadrature suite
# ---------------------------------------------------------------------------


def suite_quadrature(nmax: int = 12, order: int = 64) -> dict:
    checks: dict[str, dict] = {}
    rule = quadrature.gauss_laguerre(order)

    worst = 0.0
    for o in sorted({1, 2, 8, min(order, 32), order}):
        r = quadrature.gauss_laguerre(o)
        top = max(r.nodes)
        for k in range(2 * o):
            if k * math.log(max(top, 2.0)) > 700.0:
                break  # power would overflow the float range
            approx = r.integrate(lambda x, k=k: x**k)
            rel = abs(Fraction(approx) / factorial(k) - 1)
            worst = max(worst, float(rel))
    checks["rule-exactness"] = _float_check(worst, 1e-12)

    checks["weight-sum"] = _float_check(abs(math.fsum(rule.weights) - 1.0), 1e-13)

    worst = 0.0
    for alpha in (0, 1, 2, 5):
        gram = quadrature.gram_matrix(alpha, nmax, rule)
        worst = max(worst, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
    checks["orthonormality"] = _float_check(worst, 1e-11)

    worst = 0.0
    for alpha in range(4):
        for n in range(min(nmax, 15) + 1):
            poly = exactpoly.laguerre(n, alpha)
            value = quadrature.weighted_inner_product(poly, poly, alpha, rule)
            reference = Fraction(factorial(n + alpha), factorial(n))
            worst = max(worst, abs(value / float(reference) - 1.0))
    checks["norm-formula"] = _float_check(worst, 1e-11)

    residuals = quadrature.projection_convergence(carrier_M(4, 6), 2, 8, rule)
    tail = max(residuals[4:])
    monotone = max(
        (b - a for a, b in zip(residuals, residuals[1:])),
        default=0.0,
    )
    checks["projection-member"] = _float_check(tail, 1e-12)
    checks["projection-monotone"] = _float_check(max(monotone, 0.0), 1e-14)
    return checks


# ---------------------------------------------------------------------------
# plane suite
# ---------------------------------------------------------------------------


def _seed_coefficients(jmax: int) -> plane.ModeCoefficients:
    coeffs = {
        idx: complex(1.0 + idx.j - 0.3 * idx.m, 0.5 * idx.m - 0.1 * idx.j)
        / (1.0 + idx.j**2 + idx.m**2)
        for idx in plane.modes_up_to(jmax)
    }
    return plane.ModeCoefficients(coeffs=coeffs, jmax=jmax)


def suite_plane(jmax: int = 6, radial_order: int = 64, angular: int = 64) -> dict:
    checks: dict[str, dict] = {}
    grid = plane.PolarGrid.build(radial_order, angular)

    gram = plane.gram_2d(jmax, grid)
    checks["gram-2d"] = _float_check(
        float(np.max(np.abs(gram - np.eye(gram.shape[0])))), 1e-10
    )

    worst = 0.0
    for idx in plane.modes_up_to(jmax):
        for r in (0.3, 0.7, 1.5, 3.0):
            worst = max(
                worst,
                abs(plane.radial_de_residual(idx, r)) / plane.radial_de_scale(idx, r),
            )
    checks["radial-equation"] = _float_check(worst, 1e-9)

    seed = _seed_coefficients(min(jmax + 2, 8))
    grid_rt = grid if grid.angular_count > 2 * seed.jmax else plane.PolarGrid.build(
        radial_order, max(angular, 32)
    )
    roundtrip = plane.decompose(plane.reconstruct(seed, grid_rt), seed.jmax)
    checks["round-trip"] = _float_check(seed.max_abs_diff(roundtrip), 1e-10)

    worst = 0.0
    for idx in plane.modes_up_to(jmax):
        single = plane.ModeCoefficients(coeffs={idx: 1.0}, jmax=jmax)
        plus = plane.apply_mode_operator(Op.Jplus, single)
        expected = float(SqrtSum.sqrt((idx.j - idx.m) * (idx.j + idx.m + 1)))
        got = plus.get(idx.j, idx.m + 1) if idx.m < idx.j else 0j
        worst = max(worst, abs(got - expected))
        comm = plane.mode_commutator(Op.Jplus, Op.Jminus, single)
        worst = max(worst, abs(comm.get(idx.j, idx.m) - 2.0 * idx.m))
        for op, shift, sign in ((Op.Jplus, 1, 1), (Op.Jminus, -1, -1)):
            lhs = plane.mode_commutator(Op.J3, op, single)
            rhs = plane.apply_mode_operator(op, single)
            diff = max(
                abs(lhs.get(idx.j, idx.m + shift) - sign * rhs.get(idx.j, idx.m + shift)),
                0.0,
            )
            worst = max(worst, diff)
    checks["mode-operator-algebra"] = _exact_check(worst)

    worst = 0.0
    for idx in plane.modes_up_to(jmax):
        single = plane.ModeCoefficients(coeffs={idx: 1.0}, jmax=jmax)
        got = plane.mode_casimir(single).get(idx.j, idx.m)
        worst = max(worst, abs(got - idx.j * (idx.j + 1)))
    checks["mode-casimir"] = _exact_check(float(worst))

    worst = 0.0
    small = plane.PolarGrid.build(16, 16)
    for idx in plane.modes_up_to(3):
        single = plane.ModeCoefficients(coeffs={idx: 1.0}, jmax=4)
        raised = plane.reconstruct(plane.apply_mode_operator(Op.Jplus, single), small)
        c = plane.radial_carrier(idx)
        for k, x in enumerate(small.radial_x):
            radial = opalgebra.apply_diff(Op.Jplus, c, x)
            for q, phi in enumerate(small.angular_nodes):
                direct = radial * np.exp(1j * (idx.m + 1) * phi)
                worst = max(worst, abs(direct - raised.values[k, q]))
    checks["pointwise-consistency"] = _float_check(worst, 1e-8)
    return checks


# ---------------------------------------------------------------------------
# derived so(3,2) suite
# ---------------------------------------------------------------------------


def suite_so32(tolerance: float = 1e-9) -> dict:
    checks: dict[str, dict] = {}
    sc = opalgebra.derive_structure_constants(tolerance=tolerance)
    pair = f"[{sc.worst_pair[0].value},{sc.worst_pair[1].value}]"
    checks["commutator-closure"] = {
        "mode": "float",
        "max_residual": sc.max_fit_residual,
        "tolerance": tolerance,
        "worst_pair": pair,
        "pass": not sc.residual_flag,
    }
    checks["antisymmetry"] = _float_check(sc.antisymmetry_residual(), tolerance)
    checks["jacobi-identity"] = _float_check(sc.jacobi_residual(), tolerance)

    if sc.residual_flag:
        # Downstream quantities are meaningless on a broken algebra.
        for name in ("killing-su2-block", "killing-casimir-constancy", "killing-casimir-value"):
            checks[name] = {
                "mode": "float",
                "max_residual": float("inf"),
                "tolerance": tolerance,
                "pass": False,
                "skipped_reason": f"closure failed at {pair}",
            }
        return checks

    _, block_residual = opalgebra.su2_block_scale(sc)
    checks["killing-su2-block"] = _float_check(block_residual, 1e-10)

    states = [(0, 0), (1, 2), (2, 4), (5, 3), (3, 3), (4, 1)]
    values = [float(opalgebra.killing_casimir(sc, s)) for s in states]
    spread = max(values) - min(values)
    checks["killing-casimir-constancy"] = _float_check(spread, 1e-10)
    worst = max(abs(v + 1.25) for v in values)
    record = _float_check(worst, 1e-8)
    record["eigenvalue"] = values[0]
    record["reference"] = -1.25
    checks["killing-casimir-value"] = record
    return checks


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


def run_suites(
    names: list[str],
    nmax: int = 12,
    alpha_max: int = 10,
    order: int = 64,
    jmax: int = 6,
    angular: int = 64,
) -> dict:
    """Run the requested suites and assemble the combined report.

    The worker-count environment variable spreads suites over a thread
    pool; the report is assembled in the requested order regardless of
    completion order.
    """
    builders: dict[str, Callable[[], dict]] = {
        "exact": lambda: suite_exact(nmax=nmax, alpha_max=alpha_max),
        "algebra": lambda: suite_algebra(nmax=nmax),
        "quadrature": lambda: suite_quadrature(nmax=nmax, order=order),
        "plane": lambda: suite_plane(jmax=jmax, radial_order=order, angular=angular),
        "so32": lambda: suite_so32(),
    }
    unknown = [n for n in names if n not in builders]
    if unknown:
        raise ValueError(f"unknown suite(s): {unknown}; choose from {list(builders)}")

    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    if workers > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda n: builders[n](), names))
        suites = dict(zip(names, results))
    else:
        suites = {n: builders[n]() for n in names}

    all_pass = all(check["pass"] for checks in suites.values() for check in checks.values())
    return {"suites": suites, "all_pass": all_pass}
