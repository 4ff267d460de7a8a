"""Number-theoretic primitives.

Primes, quadratic symbols (Legendre / Kronecker), Gauss sums, Ramanujan
sums and the usual multiplicative functions.  Everything here is exact
integer arithmetic except the Gauss sum, which is a direct complex
summation.

Legendre values for a fixed prime are served from a cached residue
table (see residue_table); this is the central performance lever for
batch character-sum evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PrimeTable",
    "sieve_primes",
    "is_prime",
    "legendre",
    "residue_table",
    "kronecker",
    "gauss_sum",
    "ramanujan_sum",
    "squarefree_kernel",
    "is_fundamental_discriminant",
    "moebius",
    "euler_phi",
    "gcd",
    "factorize",
]


# gcd(x, 0) = |x| by convention; math.gcd already does this.
gcd = math.gcd


@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, in increasing order."""

    limit: int
    primes: tuple[int, ...]

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def in_range(self, lo: float, hi: float) -> list[int]:
        """Primes p with lo <= p <= hi."""
        if math.floor(hi) > self.limit:
            raise ValueError(f"prime table limit {self.limit} < requested {hi}")
        return [p for p in self.primes if lo <= p <= hi]

    def array(self) -> np.ndarray:
        return np.asarray(self.primes, dtype=np.int64)


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes.  limit < 2 gives an empty table."""
    limit = int(limit)
    if limit < 2:
        return PrimeTable(limit=limit, primes=())
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return PrimeTable(limit=limit, primes=tuple(int(p) for p in np.nonzero(mask)[0]))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond the sizes used here)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int, validate: bool = False) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if validate and (p < 3 or p % 2 == 0 or not is_prime(p)):
        raise ValueError(f"p={p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


@lru_cache(maxsize=512)
def residue_table(p: int) -> np.ndarray:
    """Lookup table t with t[a] = (a/p), built once per prime from the squares."""
    tab = np.full(p, -1, dtype=np.int8)
    tab[0] = 0
    x = np.arange(1, p, dtype=np.int64)
    tab[x * x % p] = 1
    tab.setflags(write=False)
    return tab


def is_fundamental_discriminant(D: int) -> bool:
    """D == 1 mod 4 squarefree, or D = 4m with m == 2, 3 mod 4 squarefree."""
    if D == 0:
        return False
    if D % 4 == 1:
        return _is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(abs(n)).values())


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol chi_D(n) for a fundamental discriminant D (or D = 1).

    Computed by the reciprocity algorithm, no factorization of n needed.
    """
    if D != 1 and not is_fundamental_discriminant(D):
        raise ValueError(f"D={D} is not a fundamental discriminant (or 1)")
    return _kronecker_any(D, n)


def _kronecker_any(a: int, b: int) -> int:
    # Cohen, "A Course in Computational Algebraic Number Theory", Alg. 1.4.10.
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    k = 1 if v % 2 == 0 or a % 8 in (1, 7) else -1
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and b % 8 in (3, 5):
            k = -k
        # reciprocity step (a odd at this point)
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a, b = b % abs(a), abs(a)
    return k if b == 1 else 0


def gauss_sum(p: int) -> complex:
    """tau_p = sum_t (t/p) e^(2 pi i t / p), by direct summation."""
    tab = residue_table(p).astype(np.float64)
    phases = np.exp(2j * np.pi * np.arange(p) / p)
    return complex(np.sum(tab * phases))


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of n >= 1 into {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2 if d % 6 == 5 else 4  # 5, 7, 11, 13, ... wheel
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius requires n >= 1")
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi requires n >= 1")
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def squarefree_kernel(n: int) -> int:
    """Radical: product of the distinct primes dividing n."""
    if n < 1:
        raise ValueError("squarefree_kernel requires n >= 1")
    out = 1
    for p in factorize(n):
        out *= p
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, ascending."""
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def ramanujan_sum(a: int, b: int) -> int:
    """c_b(a) = sum_{d | gcd(a,b)} d * mu(b/d).

    Equals the exponential sum over coprime residues j mod b of
    e_b(-a * jbar); see oracles.ramanujan_exponential_oracle.
    """
    if b < 1:
        raise ValueError("ramanujan_sum requires b >= 1")
    g = math.gcd(a, b)
    return sum(d * moebius(b // d) for d in divisors(b) if g % d == 0)
