import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from circforest.errors import CapExceeded, IndexOutOfRange, InvalidStepSet, TooSmall
from circforest.forests import (
    CHEBYSHEV,
    DETERMINANT,
    RESULTANT,
    count_by_chebyshev,
    count_by_determinant,
    count_by_resultant,
    counts_by_size,
    eigenvalue,
    laplacian_plus_identity,
    resultant_value,
    spanning_tree_count,
    spectrum,
    validate_spec,
)
from circforest.polynomial import chebyshev_T
from oracles import circulant_graph_det_plus_identity, leibniz_det


def spec_of(steps, half, n):
    return validate_spec(steps, half, n)


def test_validate_examples():
    s = validate_spec([1, 2], False, 10)
    assert s.vertex_count == 10 and s.degree == 4
    with pytest.raises(InvalidStepSet):
        validate_spec([1, 2], False, 4)
    s = validate_spec([1], True, 2)
    assert s.vertex_count == 4 and str(s) == "C_4(1,2)" and s.degree == 3


@pytest.mark.parametrize(
    "steps,half,n,exc",
    [
        ([], False, 9, InvalidStepSet),
        ([2, 1], False, 9, InvalidStepSet),
        ([1, 1], False, 9, InvalidStepSet),
        ([0, 1], False, 9, InvalidStepSet),
        ([3], True, 3, InvalidStepSet),
        ([1], False, 2, TooSmall),
        ([1], True, 1, TooSmall),
    ],
)
def test_validate_rejects(steps, half, n, exc):
    with pytest.raises(exc):
        validate_spec(steps, half, n)


def test_laplacian_examples():
    assert laplacian_plus_identity(spec_of([1], False, 3)) == [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]
    k4 = laplacian_plus_identity(spec_of([1], True, 2))
    assert k4 == [[4 if i == j else -1 for j in range(4)] for i in range(4)]


@settings(max_examples=30)
@given(st.sets(st.integers(1, 6), min_size=1), st.booleans(), st.integers(0, 6))
def test_laplacian_structure(steps, half, extra):
    steps = sorted(steps)
    n = steps[-1] + 1 + extra if half else 2 * steps[-1] + 1 + extra
    m = laplacian_plus_identity(spec_of(steps, half, n))
    size = len(m)
    assert all(sum(row) == 1 for row in m)
    assert all(m[i][j] == m[j][i] for i in range(size) for j in range(size))
    assert all(2 * m[i][i] > sum(abs(x) for x in m[i]) for i in range(size))


def test_determinant_examples():
    assert count_by_determinant(spec_of([1], False, 3)).value == 16 == leibniz_det(
        laplacian_plus_identity(spec_of([1], False, 3))
    )
    assert count_by_determinant(spec_of([1], False, 4)).value == 45
    assert count_by_determinant(spec_of([1], True, 2)).value == 125
    assert count_by_determinant(spec_of([1], True, 2)).method == DETERMINANT


def test_determinant_cap():
    with pytest.raises(CapExceeded):
        count_by_determinant(spec_of([1], False, 20), cap=10)


def test_resultant_examples():
    r = count_by_resultant(spec_of([1], False, 5))
    assert r.value == 121 and r.method == RESULTANT
    assert count_by_resultant(spec_of([1], True, 2)).value == 125
    assert count_by_resultant(spec_of([1], True, 3)).value == 1792


def test_chebyshev_rational_cross_checks():
    from fractions import Fraction as F

    # cycle: w = 3/2
    assert 2 * chebyshev_T(5, F(3, 2)) - 2 == 121
    assert 2 * chebyshev_T(7, F(3, 2)) - 2 == 841 == 29**2
    # Moebius ladder: u = 3/2, v = 5/2
    assert (2 * chebyshev_T(2, F(3, 2)) - 2) * (2 * chebyshev_T(2, F(5, 2)) + 2) == 125
    assert (2 * chebyshev_T(3, F(3, 2)) - 2) * (2 * chebyshev_T(3, F(5, 2)) + 2) == 16 * 112 == 1792


def test_chebyshev_examples():
    r = count_by_chebyshev(spec_of([1], False, 7))
    assert r.value == 841 and r.method == CHEBYSHEV and r.residual < 0.25
    assert count_by_chebyshev(spec_of([1], True, 2)).value == 125
    s = spec_of([1, 2], False, 5)
    assert count_by_chebyshev(s).value == count_by_determinant(s).value


def test_chebyshev_escalates_precision_for_large_values():
    s = spec_of([1, 2, 3, 4, 5], False, 400)
    r = count_by_chebyshev(s, 64)
    assert r.value == count_by_resultant(s).value
    assert r.residual < 0.25


@pytest.mark.parametrize(
    "steps,half,n",
    [([1], False, 9), ([2, 3], False, 11), ([1, 3, 4], False, 10), ([1], True, 5), ([2], True, 4), ([1, 3], True, 6)],
)
def test_methods_match_explicit_graph(steps, half, n):
    spec = spec_of(steps, half, n)
    offsets = list(steps) + ([n] if half else [])
    oracle = circulant_graph_det_plus_identity(spec.vertex_count, offsets)
    assert count_by_determinant(spec).value == oracle
    assert count_by_resultant(spec).value == oracle
    assert count_by_chebyshev(spec).value == oracle


def test_resultant_value_below_simple_range():
    # C_2 with a doubled edge: I + L = [[3, -2], [-2, 3]]
    assert resultant_value((1,), False, 2) == 5
    assert resultant_value((1,), False, 1) == 1


def test_eigenvalue_examples():
    assert eigenvalue(spec_of([1], False, 6), 0).value == 1
    assert abs(eigenvalue(spec_of([1], False, 6), 3).value - 5) < mpf(2) ** -200
    assert abs(eigenvalue(spec_of([1], True, 2), 2).value - 5) < mpf(2) ** -200
    with pytest.raises(IndexOutOfRange):
        eigenvalue(spec_of([1], False, 6), 6)


@pytest.mark.parametrize(
    "steps,half,n",
    [([1], False, 7), ([1, 2], False, 12), ([2, 5], False, 13), ([1], True, 5), ([1, 2, 4], True, 9)],
)
def test_spectrum_properties(steps, half, n):
    spec = spec_of(steps, half, n)
    lam = spectrum(spec)
    size = spec.vertex_count
    assert lam[0].value == 1
    assert all(e.value >= 1 - mpf(2) ** -40 for e in lam)
    with mp.workprec(256):
        assert all(abs(lam[j].value - lam[size - j].value) < mpf(2) ** -200 for j in range(1, size))
        prod = mp.fprod(e.value for e in lam)
        f = count_by_determinant(spec).value
        assert abs(prod / f - 1) < mpf(2) ** -200


def test_counts_by_size_examples():
    assert counts_by_size(spec_of([1], False, 3)) == [9, 6, 1]
    assert sum(counts_by_size(spec_of([1], False, 4))) == 45
    with pytest.raises(CapExceeded):
        counts_by_size(spec_of([1], False, 10), cap=5)


@pytest.mark.parametrize(
    "steps,half,n",
    [([1], False, 8), ([1, 2], False, 9), ([1, 3], False, 11), ([1], True, 4), ([2], True, 5), ([1, 2], True, 6)],
)
def test_counts_by_size_invariants(steps, half, n):
    spec = spec_of(steps, half, n)
    sizes = counts_by_size(spec)
    assert len(sizes) == spec.vertex_count
    assert sum(sizes) == count_by_determinant(spec).value
    assert sizes[-1] == 1
    assert sizes[0] == spec.vertex_count * spanning_tree_count(spec)
    # |V|-1 trees means exactly one edge, rooted at either end
    edges = spec.vertex_count * spec.degree // 2
    assert sizes[-2] == 2 * edges


def test_spanning_tree_count_cycle():
    # cycle C_n has n spanning trees
    assert spanning_tree_count(spec_of([1], False, 9)) == 9


@pytest.mark.parametrize("steps,half", [([1], False), ([1, 2], False), ([2, 3], False), ([1], True), ([1, 3], True)])
def test_strictly_increasing_in_n(steps, half):
    start = steps[-1] + 1 if half else 2 * steps[-1] + 1
    values = [count_by_resultant(spec_of(steps, half, n)).value for n in range(max(start, 2), 40)]
    assert all(v >= 1 for v in values)
    assert all(a < b for a, b in zip(values, values[1:]))
