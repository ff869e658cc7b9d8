"""Square-free parts and the f = q * a(n)^2 structure of forest counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import FactorizationIncomplete
from .forests import CirculantSpec

TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@dataclass(frozen=True)
class SquareFreeDecomposition:
    input: int
    squarefree_part: int
    cofactor_root: int


@dataclass(frozen=True)
class SquareStructure:
    spec: CirculantSpec
    value: int
    odd_step_count: int
    predicted_multiplier: int
    extracted_root: int
    holds: bool

    @property
    def n(self) -> int:
        return self.spec.n


@lru_cache(maxsize=1)
def _small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(m: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def pollard_brent(m: int, c: int = 1, max_iterations: int = 1 << 20) -> int | None:
    """A nontrivial factor of composite m via Brent's cycle search, or None."""
    if m % 2 == 0:
        return 2
    y, r, q = 2, 1, 1
    g = x = ys = 1
    batch = 128
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % m
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % m
                q = q * abs(x - y) % m
            g = math.gcd(q, m)
            k += batch
        r *= 2
        steps += r
        if steps > max_iterations:
            return None
    if g == m:
        while True:
            ys = (ys * ys + c) % m
            g = math.gcd(abs(x - ys), m)
            if g > 1:
                break
    return g if g != m else None


def factorize(m: int) -> dict[int, int]:
    """Prime factorization: trial division to 10^6, then Pollard-Brent."""
    if m < 1:
        raise ValueError("m must be positive")
    factors: dict[int, int] = {}
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_probable_prime(x):
            factors[x] = factors.get(x, 0) + 1
            continue
        r = math.isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        for c in range(1, 32):
            d = pollard_brent(x, c)
            if d is not None:
                stack += [d, x // d]
                break
        else:
            raise FactorizationIncomplete(f"could not split composite {x}")
    return dict(sorted(factors.items()))


def squarefree_part(m: int) -> SquareFreeDecomposition:
    """Write m = q * r^2 with q square-free."""
    q = r = 1
    for p, e in factorize(m).items():
        r *= p ** (e // 2)
        if e % 2:
            q *= p
    return SquareFreeDecomposition(m, q, r)


def odd_step_count(spec: CirculantSpec) -> int:
    """Number of odd s_i; the half step of C_2n(..., n) is not counted."""
    return sum(s % 2 for s in spec.steps)


def predicted_multiplier(spec: CirculantSpec) -> int:
    p = odd_step_count(spec)
    n = spec.n
    if not spec.half_step:
        return 1 if n % 2 else squarefree_part(4 * p + 1).squarefree_part
    if n % 2 == 0:
        return squarefree_part(4 * p + 1).squarefree_part
    return squarefree_part(4 * p + 3).squarefree_part


def exact_sqrt(m: int) -> int | None:
    if m < 0:
        return None
    r = math.isqrt(m)
    return r if r * r == m else None


def verify_square_structure(spec: CirculantSpec, f: int) -> SquareStructure:
    """Check f = multiplier * a^2 for the multiplier predicted from parity and p."""
    mult = predicted_multiplier(spec)
    a = None
    if f % mult == 0:
        a = exact_sqrt(f // mult)
    return SquareStructure(
        spec=spec,
        value=f,
        odd_step_count=odd_step_count(spec),
        predicted_multiplier=mult,
        extracted_root=a or 0,
        holds=a is not None and a > 0,
    )


def fibonacci_lucas(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    f0, f1 = 0, 1
    l0, l1 = 2, 1
    for _ in range(n):
        f0, f1 = f1, f0 + f1
        l0, l1 = l1, l0 + l1
    return f0, l0
