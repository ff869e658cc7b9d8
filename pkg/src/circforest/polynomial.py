"""Integer and Laurent polynomials, Chebyshev evaluation, and root isolation.

Exact work (coefficients, products over roots of unity) is done with Python
integers and :class:`fractions.Fraction`. Root finding uses mpmath at an
explicit binary precision and returns disks that are guaranteed to contain
the true roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping

from mpmath import mp, mpc, mpf

from .errors import NotMonicizable, OnCircleRoot, PrecisionExhausted
from .linalg import bareiss_det

DEFAULT_BITS = 256
MAX_BITS = 4096


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> IntPoly:
        other = _as_intpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other) -> IntPoly:
        return self + (-_as_intpoly(other))

    def __rsub__(self, other) -> IntPoly:
        return _as_intpoly(other) - self

    def __mul__(self, other) -> IntPoly:
        other = _as_intpoly(other)
        return IntPoly(tuple(_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{'*' if mono else ''}{mono}"
            parts.append(("-" if c < 0 else "+") + term)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


def _as_intpoly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    return IntPoly((int(x),))


def _mul(a, b) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial stored as sorted ``(exponent, coeff)`` pairs."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        d: dict[int, int] = {}
        for e, c in self.terms:
            d[int(e)] = d.get(int(e), 0) + int(c)
        object.__setattr__(
            self, "terms", tuple(sorted((e, c) for e, c in d.items() if c))
        )

    @classmethod
    def from_dict(cls, coefficients: Mapping[int, int]) -> LaurentPoly:
        return cls(tuple(coefficients.items()))

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def low_exp(self) -> int:
        return self.terms[0][0]

    @property
    def high_exp(self) -> int:
        return self.terms[-1][0]

    def coeff(self, e: int) -> int:
        return self.coefficients.get(e, 0)

    @property
    def is_symmetric(self) -> bool:
        d = self.coefficients
        return all(d.get(-e, 0) == c for e, c in d.items())

    def __add__(self, other) -> LaurentPoly:
        other = _as_laurent(other)
        return LaurentPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other) -> LaurentPoly:
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> LaurentPoly:
        return _as_laurent(other) - self

    def __mul__(self, other) -> LaurentPoly:
        other = _as_laurent(other)
        return LaurentPoly(
            tuple((e1 + e2, c1 * c2) for e1, c1 in self.terms for e2, c2 in other.terms)
        )

    __rmul__ = __mul__

    def __call__(self, z):
        return sum((c * z**e for e, c in self.terms), z * 0)

    def to_intpoly(self) -> tuple[IntPoly, int]:
        """Return ``(Q, shift)`` with ``P(z) = z**shift * Q(z)`` and Q(0) != 0."""
        if self.is_zero:
            return IntPoly(()), 0
        low = self.low_exp
        coeffs = [0] * (self.high_exp - low + 1)
        for e, c in self.terms:
            coeffs[e - low] = c
        return IntPoly(tuple(coeffs)), low


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly(((0, int(x)),))


# --- Chebyshev polynomials -------------------------------------------------


def chebyshev_T(n: int, x):
    """T_n(x), exact for int/Fraction input, at working precision otherwise.

    Walks the bits of n holding the pair (T_m, T_{m+1}), using
    T_2m = 2 T_m^2 - 1 and T_2m+1 = 2 T_m T_m+1 - x, so the cost is
    O(log n) multiplications.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    one = x * 0 + 1
    if n == 0:
        return one
    lo, hi = x, 2 * x * x - one  # T_1, T_2
    for bit in bin(n)[3:]:
        mid = 2 * lo * hi - x
        if bit == "1":
            lo, hi = mid, 2 * hi * hi - one
        else:
            lo, hi = 2 * lo * lo - one, mid
    return lo


def chebyshev_halfsum_identity_check(z, n: int, bits: int = DEFAULT_BITS):
    """|T_n((z + 1/z)/2) - (z^n + z^-n)/2| evaluated at ``bits`` precision."""
    if n < 1:
        raise ValueError("n must be positive")
    with mp.workprec(bits):
        z = mpc(z)
        if z == 0:
            raise ValueError("z must be nonzero")
        w = (z + 1 / z) / 2
        return abs(chebyshev_T(n, w) - (z**n + z ** (-n)) / 2)


# --- associated polynomial and monic form ----------------------------------


def associated_polynomial(spec) -> LaurentPoly:
    """P(z) = c - sum(z^s + z^-s) with c = 2k+1 (even valency) or 2k+2 (half step)."""
    k = len(spec.steps)
    const = 2 * k + 2 if spec.half_step else 2 * k + 1
    d = {0: const}
    for s in spec.steps:
        d[s] = d.get(s, 0) - 1
        d[-s] = d.get(-s, 0) - 1
    return LaurentPoly.from_dict(d)


def monicize(P: LaurentPoly) -> tuple[IntPoly, int]:
    """Return ``(Q, h)`` with ``Q(z) = -z**h * P(z)`` monic of degree 2h."""
    if P.is_zero:
        raise NotMonicizable("zero polynomial")
    h = P.high_exp
    if h <= 0 or P.low_exp != -h:
        raise NotMonicizable(f"support [{P.low_exp}, {h}] is not a symmetric band")
    Q = -P.to_intpoly()[0]
    if not Q.is_monic:
        raise NotMonicizable(f"-z^{h} P(z) has leading coefficient {Q.leading}")
    return Q, h


def unity_product_sign(h: int, m: int) -> int:
    """Sign s with prod_j P(eps_m^j) = s * prod_j Q(eps_m^j) for (Q, h) = monicize(P)."""
    return -1 if (m + h * (m - 1)) % 2 else 1


# --- products over roots of unity ------------------------------------------


def _polymod_monic(a: list[int], q: tuple[int, ...]) -> list[int]:
    d = len(q) - 1
    a = list(a)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d):
                a[i - d + j] -= c * q[j]
        a[i] = 0
    a = a[:d] + [0] * max(0, d - len(a))
    return a


def _power_of_z_mod(m: int, q: tuple[int, ...]) -> list[int]:
    result = _polymod_monic([1], q)
    base = _polymod_monic([0, 1], q)
    while m:
        if m & 1:
            result = _polymod_monic(_mul(result, base), q)
        m >>= 1
        if m:
            base = _polymod_monic(_mul(base, base), q)
    return result


def circulant_unity_product(Q: IntPoly, m: int) -> int:
    """prod_j Q(eps_m^j) as the determinant of the m x m circulant Q(S_m)."""
    mat = [[0] * m for _ in range(m)]
    for e, c in enumerate(Q.coeffs):
        for i in range(m):
            mat[i][(i + e) % m] += c
    return bareiss_det(mat)


def product_over_unity_roots(Q: IntPoly, m: int) -> int:
    """Exact integer prod_{j<m} Q(eps_m^j) = Res(z^m - 1, Q).

    For monic Q of degree d this is (-1)^(m d) * prod_{Q(a)=0} (a^m - 1),
    i.e. the determinant of multiplication by (z^m - 1) in Z[z]/(Q); only a
    d x d determinant is needed. Non-monic input falls back to the m x m
    circulant determinant.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if Q.is_zero:
        raise ValueError("Q must be nonzero")
    d = Q.degree
    if d == 0:
        return Q.coeffs[0] ** m
    if not Q.is_monic:
        return circulant_unity_product(Q, m)
    q = Q.coeffs
    r = _power_of_z_mod(m, q)
    r[0] -= 1
    cols = [r]
    for _ in range(d - 1):
        cols.append(_polymod_monic([0] + cols[-1], q))
    det = bareiss_det([list(row) for row in zip(*cols)])
    return -det if (m * d) % 2 else det


# --- root isolation --------------------------------------------------------


def _frac_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _frac_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _frac_trim(q), _frac_trim(a[: len(b) - 1])


def _frac_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _frac_trim(list(a)), _frac_trim(list(b))
    while b:
        a, b = b, _frac_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def _frac_deriv(a: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(a)][1:]


def _frac_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _frac_trim([x - y for x, y in zip(a, b)])


def _primitive(a: list[Fraction]) -> tuple[int, ...]:
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints)


def squarefree_factors(Q: IntPoly) -> list[tuple[tuple[int, ...], int]]:
    """Yun's decomposition of Q into pairwise coprime squarefree integer factors."""
    f = [Fraction(c) for c in Q.coeffs]
    df = _frac_deriv(f)
    g = _frac_gcd(f, df)
    if len(g) == 1:
        return [(Q.coeffs, 1)]
    c = _frac_divmod(f, g)[0]
    d = _frac_sub(_frac_divmod(df, g)[0], _frac_deriv(c))
    out = []
    i = 1
    while len(c) > 1:
        a = _frac_gcd(c, d)
        if len(a) > 1:
            out.append((_primitive(a), i))
        c = _frac_divmod(c, a)[0]
        d = _frac_sub(_frac_divmod(d, a)[0], _frac_deriv(c))
        i += 1
    return out


@dataclass(frozen=True)
class ComplexRootSet:
    """All roots of a polynomial, each inside a certified disk.

    ``radii[i]`` bounds the distance from ``roots[i]`` to a true root.
    Repeated roots appear once per multiplicity.
    """

    roots: tuple
    radii: tuple
    bits: int

    @property
    def radius_bound(self):
        return max(self.radii) if self.radii else mpf(0)

    def sides(self) -> tuple[int, ...]:
        """+1 strictly outside the unit circle, -1 strictly inside, 0 undecided."""
        out = []
        with mp.workprec(self.bits):
            for z, r in zip(self.roots, self.radii):
                a = abs(z)
                out.append(1 if a - r > 1 else -1 if a + r < 1 else 0)
        return tuple(out)

    def outside(self) -> list:
        return [(z, r) for z, r, s in zip(self.roots, self.radii, self.sides()) if s > 0]

    def reciprocal_pairs(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) where roots[j] is within tolerance of 1/roots[i]."""
        pairs = []
        with mp.workprec(self.bits):
            for i, (z, r) in enumerate(zip(self.roots, self.radii)):
                a = abs(z)
                if a <= r:
                    continue
                tol_i = r / (a * (a - r))
                for j, (y, ry) in enumerate(zip(self.roots, self.radii)):
                    if abs(1 / z - y) <= tol_i + ry:
                        pairs.append((i, j))
                        break
        return pairs

    def expand(self) -> list:
        """Coefficients of prod (z - root), lowest degree first."""
        with mp.workprec(self.bits):
            c = [mpc(1)]
            for z in self.roots:
                nxt = [mpc(0)] * (len(c) + 1)
                for i, a in enumerate(c):
                    nxt[i + 1] += a
                    nxt[i] -= z * a
                c = nxt
            return c


def _horner2(c, z):
    p = c[-1]
    dp = 0
    for a in reversed(c[:-1]):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _aberth(coeffs: tuple[int, ...], bits: int) -> list:
    d = len(coeffs) - 1
    lead = coeffs[-1]
    radius = 1 + max(abs(Fraction(a, lead)) for a in coeffs[:-1])
    with mp.workprec(64):
        z = [
            mpf(float(radius)) * mp.expj(2 * mp.pi * j / d + mpf(0.4) / d)
            for j in range(d)
        ]
    prec = 64
    while True:
        with mp.workprec(prec):
            c = [mpf(a) for a in coeffs]
            limit = 2000 if prec == 64 else 40
            tol = mpf(2) ** (16 - prec)
            for _ in range(limit):
                worst = mpf(0)
                for k in range(d):
                    zk = z[k]
                    p, dp = _horner2(c, zk)
                    if p == 0:
                        continue
                    s = sum(1 / (zk - z[j]) for j in range(d) if j != k)
                    if dp == 0:
                        delta = p * tol
                    else:
                        ratio = p / dp
                        delta = ratio / (1 - ratio * s)
                    z[k] = zk - delta
                    worst = max(worst, abs(delta) / max(1, abs(zk)))
                if worst <= tol:
                    break
            else:
                raise PrecisionExhausted(
                    f"root iteration did not settle at {prec} bits"
                )
        if prec >= bits + 32:
            return z
        prec = min(2 * prec, bits + 32)


def _certified_radii(coeffs: tuple[int, ...], z: list, bits: int) -> list:
    """Weierstrass/Gerschgorin inclusion radii d*|W_k|, padded for rounding."""
    d = len(coeffs) - 1
    with mp.workprec(bits):
        u = mpf(2) ** (-bits)
        c = [mpf(a) for a in coeffs]
        absc = [abs(a) for a in c]
        lead = abs(c[-1])
        radii = []
        for k, zk in enumerate(z):
            p, _ = _horner2(c, zk)
            a = abs(zk)
            scale = sum(ac * a**i for i, ac in enumerate(absc))
            num = abs(p) + 8 * (d + 1) * u * scale
            den = lead
            for j in range(d):
                if j != k:
                    den *= abs(zk - z[j])
            den *= 1 - 8 * d * u
            if den <= 0:
                raise PrecisionExhausted("coincident root approximations")
            radii.append(d * num / den * (1 + 8 * d * u))
    return radii


def find_roots(Q: IntPoly, bits: int = DEFAULT_BITS) -> ComplexRootSet:
    """Isolate every complex root of Q in a disk at ``bits`` working precision.

    Repeated factors are split off first; each squarefree factor is solved
    by Aberth-Ehrlich iteration and then certified. Raises
    PrecisionExhausted if the certified disks of a factor overlap.
    """
    if bits < 64:
        raise ValueError("precision budget must be at least 64 bits")
    if Q.is_zero:
        raise ValueError("Q must be nonzero")
    roots, radii = [], []
    for factor, mult in squarefree_factors(Q):
        d = len(factor) - 1
        if d == 0:
            continue
        if d == 1:
            with mp.workprec(bits + 32):
                z = [mpc(mpf(-factor[0]) / factor[1])]
        else:
            z = _aberth(factor, bits)
        rad = _certified_radii(factor, z, bits)
        with mp.workprec(bits):
            for i in range(d):
                for j in range(i + 1, d):
                    if abs(z[i] - z[j]) <= rad[i] + rad[j]:
                        raise PrecisionExhausted(
                            f"root disks overlap at {bits} bits"
                        )
        for zi, ri in zip(z, rad):
            roots.extend([zi] * mult)
            radii.extend([ri] * mult)
    return ComplexRootSet(tuple(roots), tuple(radii), bits)


@lru_cache(maxsize=512)
def _classified(coeffs: tuple[int, ...], bits: int) -> ComplexRootSet:
    Q = IntPoly(coeffs)
    b = bits
    while True:
        try:
            rs = find_roots(Q, b)
        except PrecisionExhausted:
            rs = None
        if rs is not None:
            sides = rs.sides()
            if all(sides):
                return rs
            with mp.workprec(b):
                for z, r, s in zip(rs.roots, rs.radii, sides):
                    if s == 0 and r < mpf(2) ** (-b // 4) and abs(abs(z) - 1) <= r:
                        raise OnCircleRoot(f"{Q} has a root on the unit circle")
        if b >= MAX_BITS:
            raise PrecisionExhausted(f"could not classify roots of {Q} at {b} bits")
        b = min(2 * b, MAX_BITS)


def classified_roots(Q: IntPoly, bits: int = DEFAULT_BITS) -> ComplexRootSet:
    """find_roots with precision doubling until every root is strictly
    inside or outside the unit circle. Results are cached per (Q, bits)."""
    return _classified(Q.coeffs, bits)

