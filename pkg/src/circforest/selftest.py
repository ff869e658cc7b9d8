"""The invariant grid run by ``circforest selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator

from mpmath import mp

from .errors import CircForestError
from .forests import (
    CirculantSpec,
    count_by_chebyshev,
    count_by_determinant,
    count_by_resultant,
    resultant_value,
    validate_spec,
)
from .mahler import (
    asymptotic_constant_by_roots,
    growth_polynomial,
    mahler_quadrature,
)
from .structure import fibonacci_lucas, verify_square_structure

EVEN_STEPS = (1, 2, 3, 4, 5)
ODD_STEPS = (1, 2, 3, 4)
EVEN_N_MAX = 64
ODD_N_MAX = 40


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def step_sets(pool) -> Iterator[tuple[int, ...]]:
    for r in range(1, len(pool) + 1):
        yield from combinations(pool, r)


def grid_specs(even_n_max: int = EVEN_N_MAX, odd_n_max: int = ODD_N_MAX) -> Iterator[CirculantSpec]:
    """Every valid even-valency spec with steps from {1..5}, 3 <= n <= even_n_max,
    and every odd-valency spec with steps from {1..4}, 2 <= n <= odd_n_max."""
    for steps in step_sets(EVEN_STEPS):
        for n in range(max(3, 2 * steps[-1] + 1), even_n_max + 1):
            yield validate_spec(steps, False, n)
    for steps in step_sets(ODD_STEPS):
        for n in range(max(2, steps[-1] + 1), odd_n_max + 1):
            yield validate_spec(steps, True, n)


def _grid_checks(specs, bits: int) -> list[CheckResult]:
    agree_fail, struct_fail, increasing_fail = [], [], []
    last: dict[tuple, int] = {}
    total = 0
    for spec in specs:
        total += 1
        det = count_by_determinant(spec).value
        res = count_by_resultant(spec).value
        cheb = count_by_chebyshev(spec, bits).value
        if not det == res == cheb:
            agree_fail.append(f"{spec}: det={det} res={res} cheb={cheb}")
        s = verify_square_structure(spec, det)
        if not s.holds:
            struct_fail.append(f"{spec}: f={det} multiplier={s.predicted_multiplier}")
        key = (spec.steps, spec.half_step)
        if key in last and det <= last[key]:
            increasing_fail.append(str(spec))
        last[key] = det
    return [
        CheckResult(
            "method-agreement",
            not agree_fail,
            f"{total} specs" if not agree_fail else "; ".join(agree_fail[:5]),
        ),
        CheckResult(
            "square-structure",
            not struct_fail,
            f"{total} specs" if not struct_fail else "; ".join(struct_fail[:5]),
        ),
        CheckResult(
            "increasing-in-n",
            not increasing_fail,
            f"{len(last)} families" if not increasing_fail else "; ".join(increasing_fail[:5]),
        ),
    ]


def _cycle_identity() -> CheckResult:
    bad = []
    for n in range(2, 41):
        # n = 2 is below the simple-graph range; the product formula still applies
        f = resultant_value((1,), False, n)
        F, L = fibonacci_lucas(n)
        if f != (5 * F * F if n % 2 == 0 else L * L):
            bad.append(n)
    return CheckResult("cycle-identity", not bad, "2 <= n <= 40" if not bad else f"n={bad}")


def _mahler_cross_check(bits: int, quad_tol: float) -> CheckResult:
    bad = []
    count = 0
    for half, pool in ((False, EVEN_STEPS), (True, ODD_STEPS)):
        for steps in step_sets(pool):
            spec = CirculantSpec(steps, half, 2 * steps[-1] + 1)
            roots = asymptotic_constant_by_roots(spec, bits)
            quad = mahler_quadrature(growth_polynomial(spec), quad_tol)
            count += 1
            if not roots.agrees_with(quad) or roots.value <= 1:
                bad.append(f"{spec}: {mp.nstr(roots.value, 15)} vs {mp.nstr(quad.value, 15)}")
    return CheckResult("mahler-cross-check", not bad, f"{count} polynomials" if not bad else "; ".join(bad))


def run_selftest(
    bits: int = 256,
    quad_tol: float = 1e-10,
    even_n_max: int = EVEN_N_MAX,
    odd_n_max: int = ODD_N_MAX,
) -> list[CheckResult]:
    checks: list[tuple[str, Callable[[], list[CheckResult]]]] = [
        ("grid", lambda: _grid_checks(grid_specs(even_n_max, odd_n_max), bits)),
        ("cycle-identity", lambda: [_cycle_identity()]),
        ("mahler-cross-check", lambda: [_mahler_cross_check(bits, quad_tol)]),
    ]
    results = []
    for name, fn in checks:
        try:
            results.extend(fn())
        except CircForestError as exc:
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
