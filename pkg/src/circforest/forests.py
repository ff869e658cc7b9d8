"""Rooted spanning forests of circulant graphs.

Three independent routes to f_G = det(I + L):

* ``count_by_determinant``: Bareiss elimination on the explicit matrix.
* ``count_by_resultant``: exact products of the associated polynomial over
  roots of unity.
* ``count_by_chebyshev``: floating evaluation of prod |2 T_n(w_p) - 2| (and the
  odd-valency analogue) from the roots of P, rounded to the nearest integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from mpmath import mp, mpf

from .errors import (
    CapExceeded,
    IndexOutOfRange,
    InternalInconsistency,
    InvalidStepSet,
    PrecisionExhausted,
    TooSmall,
)
from .linalg import bareiss_det, berkowitz_charpoly
from .polynomial import (
    DEFAULT_BITS,
    MAX_BITS,
    associated_polynomial,
    classified_roots,
    monicize,
    product_over_unity_roots,
    unity_product_sign,
)

DETERMINANT_CAP = 4096
BY_SIZE_CAP = 512
ROUNDING_THRESHOLD = 0.25

DETERMINANT = "determinant"
RESULTANT = "resultant"
CHEBYSHEV = "chebyshev"
METHODS = (DETERMINANT, RESULTANT, CHEBYSHEV)


@dataclass(frozen=True)
class CirculantSpec:
    """C_n(s_1..s_k), or C_2n(s_1..s_k, n) when ``half_step`` is set."""

    steps: tuple[int, ...]
    half_step: bool
    n: int

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def vertex_count(self) -> int:
        return 2 * self.n if self.half_step else self.n

    @property
    def degree(self) -> int:
        return 2 * self.k + 1 if self.half_step else 2 * self.k

    def with_n(self, n: int) -> CirculantSpec:
        return validate_spec(self.steps, self.half_step, n)

    def __str__(self) -> str:
        s = ",".join(map(str, self.steps))
        if self.half_step:
            return f"C_{2 * self.n}({s},{self.n})"
        return f"C_{self.n}({s})"


@dataclass(frozen=True)
class ForestCount:
    value: int
    method: str
    residual: Optional[float] = None


@dataclass(frozen=True)
class SpectrumEntry:
    index: int
    value: mpf


def validate_spec(steps: Iterable[int], half_step: bool, n: int) -> CirculantSpec:
    steps = tuple(int(s) for s in steps)
    n = int(n)
    if not steps:
        raise InvalidStepSet("at least one step is required")
    if n < 1 or (2 * n if half_step else n) < 3:
        raise TooSmall(f"vertex count {2 * n if half_step else n} is below 3")
    if steps[0] < 1 or any(a >= b for a, b in zip(steps, steps[1:])):
        raise InvalidStepSet(f"steps {list(steps)} are not strictly increasing positive")
    if half_step:
        if steps[-1] >= n:
            raise InvalidStepSet(f"largest step {steps[-1]} must be < n = {n}")
    elif 2 * steps[-1] >= n:
        raise InvalidStepSet(f"largest step {steps[-1]} must be < n/2 = {n / 2}")
    return CirculantSpec(steps, bool(half_step), n)


def laplacian_plus_identity(spec: CirculantSpec) -> list[list[int]]:
    size = spec.vertex_count
    row = [0] * size
    row[0] = spec.degree + 1
    for s in spec.steps:
        row[s % size] -= 1
        row[-s % size] -= 1
    if spec.half_step:
        row[spec.n] -= 1
    return [row[-i:] + row[:-i] for i in range(size)]


def laplacian(spec: CirculantSpec) -> list[list[int]]:
    m = laplacian_plus_identity(spec)
    for i in range(len(m)):
        m[i][i] -= 1
    return m


def count_by_determinant(spec: CirculantSpec, cap: int = DETERMINANT_CAP) -> ForestCount:
    if spec.vertex_count > cap:
        raise CapExceeded(f"{spec.vertex_count} vertices exceeds cap {cap}")
    return ForestCount(bareiss_det(laplacian_plus_identity(spec)), DETERMINANT)


def _unity_product(P, m: int) -> int:
    """Exact prod_{j<m} P(eps_m^j) for a symmetric Laurent P with -P monic-able."""
    Q, h = monicize(P)
    return unity_product_sign(h, m) * product_over_unity_roots(Q, m)


def resultant_value(steps, half_step: bool, n: int) -> int:
    """Product formula for f at any n >= 1, without the simple-graph check.

    For n below the validity range this is the eigenvalue product of the
    corresponding circulant multigraph.
    """
    P = associated_polynomial(CirculantSpec(tuple(steps), half_step, n))
    if not half_step:
        value = _unity_product(P, n)
    else:
        a = _unity_product(P - 1, n)
        b2 = _unity_product(P + 1, 2 * n)
        b1 = _unity_product(P + 1, n)
        value, rem = divmod(a * b2, b1)
        if rem:
            raise InternalInconsistency(
                f"odd-valency quotient left remainder {rem} at n={n}"
            )
    if value < 1:
        raise InternalInconsistency(f"eigenvalue product {value} is not positive")
    return value


def count_by_resultant(spec: CirculantSpec) -> ForestCount:
    return ForestCount(resultant_value(spec.steps, spec.half_step, spec.n), RESULTANT)


def _chebyshev_product(roots, n: int, shift: int, bits: int):
    """prod over |z|>1 of |z^n + z^-n + shift| with an absolute error bound.

    Each factor equals |2 T_n(w) + shift| for w = (z + 1/z)/2.
    """
    with mp.workprec(bits):
        value = mpf(1)
        rel = mpf(0)
        for z, r in roots.outside():
            zn = z**n
            g = zn + 1 / zn + shift
            a = abs(z)
            # |g'| <= n (|z|+r)^(n-1) + n (|z|-r)^(-n-1) on the root disk
            slope = n * (a + r) ** (n - 1) + n * (a - r) ** (-n - 1)
            ag = abs(g)
            if ag <= slope * r:
                raise PrecisionExhausted("factor not resolved at this precision")
            rel += slope * r / (ag - slope * r)
            value *= ag
        rel += (4 * n + 16) * len(roots.roots) * mpf(2) ** (-bits)
        return value, rel


def count_by_chebyshev(spec: CirculantSpec, bits: int = DEFAULT_BITS) -> ForestCount:
    """Evaluate the Chebyshev product via roots z of P with |z| > 1.

    The w-equation roots are w_p = (z_p + 1/z_p)/2, so
    2 T_n(w_p) -/+ 2 = z_p^n + z_p^-n -/+ 2. Precision is doubled from
    ``bits`` until the propagated error bound is below the rounding
    threshold.
    """
    P = associated_polynomial(spec)
    if spec.half_step:
        parts = [(P - 1, -2), (P + 1, 2)]
    else:
        parts = [(P, -2)]
    b = bits
    while True:
        try:
            total = mpf(1)
            rel = mpf(0)
            with mp.workprec(b):
                for poly, shift in parts:
                    Q, _ = monicize(poly)
                    roots = classified_roots(Q, b)
                    v, r = _chebyshev_product(roots, spec.n, shift, b)
                    total *= v
                    rel += r
                value = int(mp.nint(total))
                residual = abs(total - value)
                bound = total * rel * (1 + rel)
                if bound < ROUNDING_THRESHOLD and residual < ROUNDING_THRESHOLD:
                    return ForestCount(value, CHEBYSHEV, float(residual))
        except PrecisionExhausted:
            pass
        if b >= MAX_BITS:
            raise PrecisionExhausted(
                f"Chebyshev product for {spec} not resolved at {b} bits"
            )
        b = min(2 * b, MAX_BITS)


def count(spec: CirculantSpec, method: str, bits: int = DEFAULT_BITS) -> ForestCount:
    if method == DETERMINANT:
        return count_by_determinant(spec)
    if method == RESULTANT:
        return count_by_resultant(spec)
    if method == CHEBYSHEV:
        return count_by_chebyshev(spec, bits)
    raise ValueError(f"unknown method {method!r}")


def eigenvalue(spec: CirculantSpec, j: int, bits: int = DEFAULT_BITS) -> SpectrumEntry:
    """j-th eigenvalue of I + L from the circulant symbol, in real arithmetic."""
    size = spec.vertex_count
    if not 0 <= j < size:
        raise IndexOutOfRange(f"index {j} outside [0, {size})")
    with mp.workprec(bits):
        theta = 2 * mp.pi * j / size
        value = mpf(spec.degree + 1) - 2 * sum(mp.cos(theta * s) for s in spec.steps)
        if spec.half_step:
            value -= 1 if j % 2 == 0 else -1
        return SpectrumEntry(j, +value)


def spectrum(spec: CirculantSpec, bits: int = DEFAULT_BITS) -> list[SpectrumEntry]:
    return [eigenvalue(spec, j, bits) for j in range(spec.vertex_count)]


def counts_by_size(spec: CirculantSpec, cap: int = BY_SIZE_CAP) -> list[int]:
    """Number of rooted spanning forests with exactly k trees, for k = 1..|V|.

    These are the absolute values of the coefficients of the Laplacian
    characteristic polynomial (the constant term is zero and dropped).
    """
    size = spec.vertex_count
    if size > cap:
        raise CapExceeded(f"{size} vertices exceeds cap {cap}")
    chi = berkowitz_charpoly(laplacian(spec))  # highest degree first
    low_first = chi[::-1]
    if low_first[0] != 0:
        raise InternalInconsistency("Laplacian is not singular")
    return [abs(c) for c in low_first[1:]]


def spanning_tree_count(spec: CirculantSpec) -> int:
    """Kirchhoff count: any cofactor of the Laplacian."""
    lap = laplacian(spec)
    return bareiss_det([row[1:] for row in lap[1:]])
