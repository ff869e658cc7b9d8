"""Exit criteria. Each test appends one PASS/FAIL line to the terminal summary."""

import subprocess
import sys
import time

import pytest
from mpmath import mp, mpf

from circforest.forests import (
    count_by_chebyshev,
    count_by_determinant,
    count_by_resultant,
    counts_by_size,
    resultant_value,
    validate_spec,
)
from circforest.mahler import (
    asymptotic_constant,
    asymptotic_constant_by_roots,
    growth_polynomial,
    mahler_quadrature,
)
from circforest.selftest import grid_specs
from circforest.structure import fibonacci_lucas, predicted_multiplier, verify_square_structure
from conftest import ACCEPTANCE_LINES


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def grid():
    start = time.perf_counter()
    rows = []
    for spec in grid_specs(64, 40):
        rows.append(
            (
                spec,
                count_by_determinant(spec).value,
                count_by_resultant(spec).value,
                count_by_chebyshev(spec).value,
            )
        )
    return rows, time.perf_counter() - start


def test_criterion_1_oracle_equivalence(grid):
    rows, elapsed = grid
    bad = [str(s) for s, d, r, c in rows if not d == r == c]
    even = sum(1 for s, *_ in rows if not s.half_step)
    odd = len(rows) - even
    # 31 step sets x valid n in [3, 64]; 15 step sets x valid n in [2, 40]
    assert even == sum(64 - 2 * max(ss) for ss in _subsets(5))
    assert odd == sum(40 - max(ss) for ss in _subsets(4))
    report(
        1,
        "three counting methods agree on the grid",
        not bad and elapsed < 300,
        f"{len(rows)} specs, {elapsed:.1f}s" + (f", mismatches {bad[:3]}" if bad else ""),
    )


def _subsets(top):
    from itertools import combinations

    return [c for r in range(1, top + 1) for c in combinations(range(1, top + 1), r)]


def test_criterion_2_paper_fixtures():
    failures = []
    for n in range(2, 41):
        F, L = fibonacci_lucas(n)
        expect = 5 * F * F if n % 2 == 0 else L * L
        f = resultant_value((1,), False, n)
        if f != expect:
            failures.append(n)
        if n >= 3 and count_by_determinant(validate_spec([1], False, n)).value != expect:
            failures.append(n)
    c4 = validate_spec([1], True, 2)
    c6 = validate_spec([1], True, 3)
    c3 = validate_spec([1], False, 3)
    ok = (
        not failures
        and count_by_determinant(c4).value == 125
        and count_by_determinant(c6).value == 1792 == 7 * 16**2
        and counts_by_size(c3) == [9, 6, 1]
        and sum(counts_by_size(c3)) == 16
    )
    report(2, "exact paper fixtures", ok, f"cycle mismatches at n={failures}" if failures else "")


def test_criterion_3_paper_constants():
    with mp.workprec(256):
        checks = []
        a1 = asymptotic_constant(validate_spec([1], False, 5))
        checks.append(("C_n(1)", abs(a1.value - (3 + mp.sqrt(5)) / 2) < 1e-10))
        a12 = asymptotic_constant(validate_spec([1, 2], False, 5))
        checks.append(("C_n(1,2)", abs(a12.value - mpf("4.3902568")) < 1e-6))
        a13 = asymptotic_constant(validate_spec([1, 3], False, 7)).value
        quartic = abs(a13**4 - 4 * a13**3 - 2 * a13**2 - a13 + 1)
        checks.append(("C_n(1,3)", abs(a13 - mpf("4.48461")) < 1e-4 and quartic < 1e-8))
        mob = validate_spec([1], True, 5)
        k = asymptotic_constant(mob).value
        closed = (3 + mp.sqrt(5)) * (5 + mp.sqrt(21)) / 4
        checks.append(("C_2n(1,n)", abs(k - closed) < 1e-4 and abs(k - mpf("12.5438")) < 1e-4))
        agree = []
        for spec in (validate_spec([1], False, 5), validate_spec([1, 2], False, 5),
                     validate_spec([1, 3], False, 7), mob):
            r = asymptotic_constant_by_roots(spec)
            q = mahler_quadrature(growth_polynomial(spec))
            agree.append(abs(r.value - q.value) <= r.error_bound + q.error_bound)
        checks.append(("both methods agree", all(agree)))
    bad = [name for name, ok in checks if not ok]
    report(3, "paper constants", not bad, f"failed: {bad}" if bad else f"C_n(1,3) quartic residual {mp.nstr(quartic, 3)}")


def test_criterion_4_square_structure(grid):
    rows, _ = grid
    bad = []
    for spec, f, *_ in rows:
        s = verify_square_structure(spec, f)
        if not s.holds or s.predicted_multiplier != predicted_multiplier(spec):
            bad.append(str(spec))
    report(4, "square structure on the grid", not bad, f"{len(rows)} specs" + (f", failures {bad[:3]}" if bad else ""))


def test_criterion_5_asymptotic_convergence():
    start = time.perf_counter()
    with mp.workprec(256):
        A = asymptotic_constant(validate_spec([1, 2], False, 5), 256).value
        f = count_by_resultant(validate_spec([1, 2], False, 100)).value
        dev = abs(mpf(f) / A**100 - 1)
    elapsed = time.perf_counter() - start
    report(5, "|f/A^n - 1| <= 1e-6 at n = 100", dev <= 1e-6 and elapsed < 30, f"deviation {mp.nstr(dev, 3)}, {elapsed:.2f}s")


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "circforest", *args], capture_output=True, timeout=600
    )


def test_criterion_6_cli_determinism():
    argv = ["count-range", "--steps", "1,2", "--n-from", "3", "--n-to", "20", "--method", "all", "--format", "json"]
    a, b = _cli(*argv), _cli(*argv)
    same = a.returncode == b.returncode == 0 and a.stdout == b.stdout and a.stdout
    st = _cli("selftest")
    report(6, "CLI determinism and selftest", bool(same) and st.returncode == 0,
           f"selftest exit {st.returncode}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
