"""Mahler measures and the growth constants of forest counts.

Two independent estimators are provided: the root product
|a| * prod_{|z|>1} |z| and the trapezoidal mean of log|P| over the unit
circle. Each returns a value with an error bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from mpmath import mp, mpf

from .errors import InternalInconsistency, OnCircleRoot, ToleranceNotReached
from .forests import CirculantSpec, resultant_value
from .polynomial import DEFAULT_BITS, LaurentPoly, associated_polynomial, classified_roots

ROOT_PRODUCT = "rootProduct"
QUADRATURE = "quadrature"

MIN_NODES = 64
MAX_NODES = 1 << 20
SAFETY = 4


@dataclass(frozen=True)
class MahlerEstimate:
    value: mpf
    error_bound: mpf
    method: str

    def agrees_with(self, other: MahlerEstimate) -> bool:
        return abs(self.value - other.value) <= self.error_bound + other.error_bound


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    value: int
    ratio: mpf
    nth_root: mpf
    valid_graph: bool


@dataclass(frozen=True)
class ConvergenceReport:
    spec: CirculantSpec
    rows: list[ConvergenceRow] = field(default_factory=list)
    limit_constant: Optional[MahlerEstimate] = None
    tolerance: float = 1e-6

    @property
    def within_tolerance(self) -> Optional[bool]:
        """|f/A^n - 1| <= tolerance at the last row; None below n = 100."""
        if not self.rows or self.rows[-1].n < 100:
            return None
        return abs(self.rows[-1].ratio - 1) <= self.tolerance


def mahler_root_product(P: LaurentPoly, bits: int = DEFAULT_BITS) -> MahlerEstimate:
    if P.is_zero:
        raise ValueError("P must be nonzero")
    Q, _ = P.to_intpoly()
    with mp.workprec(bits):
        lead = abs(mpf(Q.leading))
        if Q.degree == 0:
            return MahlerEstimate(lead, mpf(2) ** (-bits) * lead, ROOT_PRODUCT)
        roots = classified_roots(Q, bits)
        value = lead
        rel = mpf(0)
        for z, r in roots.outside():
            a = abs(z)
            value *= a
            rel += r / (a - r)
        rel += 4 * (Q.degree + 1) * mpf(2) ** (-bits)
        bound = value * (mp.exp(rel) - 1)
        return MahlerEstimate(+value, bound, ROOT_PRODUCT)


def _log_abs(P: LaurentPoly, theta, floor):
    v = abs(P(mp.expj(theta)))
    if v <= floor:
        raise OnCircleRoot(f"|P| vanishes near angle {mp.nstr(theta, 8)}")
    return mp.log(v)


def quadrature_levels(P: LaurentPoly, bits: int = 128) -> Iterator[tuple[int, mpf]]:
    """Successive trapezoid estimates of exp(mean log|P(e^{2 pi i t})|).

    Yields ``(nodes, estimate)`` with the node count doubling from 64; old
    nodes are reused, so each level only evaluates the new midpoints.
    """
    with mp.workprec(bits):
        floor = mpf(2) ** (-bits // 2)
        N = MIN_NODES
        total = sum(_log_abs(P, 2 * mp.pi * j / N, floor) for j in range(N))
        yield N, mp.exp(total / N)
    while N < MAX_NODES:
        with mp.workprec(bits):
            total += sum(
                _log_abs(P, 2 * mp.pi * (2 * j + 1) / (2 * N), floor) for j in range(N)
            )
            N *= 2
            yield N, mp.exp(total / N)


def mahler_quadrature(
    P: LaurentPoly, tol: float = 1e-10, bits: int = 128
) -> MahlerEstimate:
    """Trapezoid rule on the periodic integrand, doubling nodes until two
    successive estimates differ by less than ``tol``."""
    if P.is_zero:
        raise ValueError("P must be nonzero")
    prev = None
    for _, est in quadrature_levels(P, bits):
        if prev is not None:
            with mp.workprec(bits):
                diff = abs(est - prev)
                if diff < tol:
                    floor = est * mpf(2) ** (16 - bits)
                    return MahlerEstimate(est, max(SAFETY * diff, floor), QUADRATURE)
        prev = est
    raise ToleranceNotReached(f"no convergence to {tol} within {MAX_NODES} nodes")


def measure_polynomials(spec: CirculantSpec) -> list[LaurentPoly]:
    """Factors whose measures multiply to the growth constant."""
    P = associated_polynomial(spec)
    return [P - 1, P + 1] if spec.half_step else [P]


def growth_polynomial(spec: CirculantSpec) -> LaurentPoly:
    """P for even valency; (P - 1)(P + 1) for the half-step family."""
    factors = measure_polynomials(spec)
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


def asymptotic_constant_by_roots(spec: CirculantSpec, bits: int = DEFAULT_BITS) -> MahlerEstimate:
    # measure is multiplicative, so the odd case is M(P-1) * M(P+1)
    with mp.workprec(bits):
        value, rel = mpf(1), mpf(0)
        for poly in measure_polynomials(spec):
            e = mahler_root_product(poly, bits)
            value *= e.value
            rel += e.error_bound / e.value
        return MahlerEstimate(+value, value * (mp.exp(rel) - 1), ROOT_PRODUCT)


def asymptotic_constant(
    spec: CirculantSpec, bits: int = DEFAULT_BITS, quad_tol: float = 1e-10
) -> MahlerEstimate:
    """Growth constant A (or K) with f ~ A^n, cross-checked by quadrature."""
    est = asymptotic_constant_by_roots(spec, bits)
    quad = mahler_quadrature(growth_polynomial(spec), quad_tol)
    if not est.agrees_with(quad):
        raise InternalInconsistency(
            f"root product {mp.nstr(est.value, 20)} and quadrature "
            f"{mp.nstr(quad.value, 20)} disagree beyond their bounds"
        )
    return est


def convergence_report(
    spec: CirculantSpec, n_max: int, bits: int = DEFAULT_BITS, tolerance: float = 1e-6
) -> ConvergenceReport:
    """Exact f(n) for n = 1..n_max against A^n.

    Rows for n where the step set does not define a simple graph are kept
    (the product formula still applies) and marked ``valid_graph=False``.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    A = asymptotic_constant(spec, bits)
    rows = []
    with mp.workprec(bits):
        for n in range(1, n_max + 1):
            f = resultant_value(spec.steps, spec.half_step, n)
            valid = (n > spec.steps[-1]) if spec.half_step else (n > 2 * spec.steps[-1])
            valid = valid and (2 * n if spec.half_step else n) >= 3
            rows.append(
                ConvergenceRow(
                    n, f, mpf(f) / A.value**n, mpf(f) ** (mpf(1) / n), valid
                )
            )
    return ConvergenceReport(spec, rows, A, tolerance)
