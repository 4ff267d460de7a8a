"""The curve model y^2 = x^3 + r x + s and its Frobenius traces.

Traces a_p are computed by two independent routes: a real Legendre-symbol
sum (sigma_p) and the complex double exponential sum divided by the Gauss
sum (sigma_p_charsum).  Both are valid for p >= 5 even at primes of
singular reduction.

Batch evaluation groups curves by (r mod p, s mod p) and reuses the
per-prime quadratic-residue table, so sweeps cost table lookups instead
of repeated modular exponentiations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import gauss_sum, is_prime, residue_table, sieve_primes

__all__ = [
    "Curve",
    "TraceData",
    "NumericalDriftError",
    "discriminant",
    "is_minimal",
    "star_map",
    "sigma_p",
    "sigma_p_batch",
    "sigma_p_charsum",
    "ap",
    "c_pk",
    "conductor_surrogate",
]


class NumericalDriftError(RuntimeError):
    """Complex character-sum evaluation drifted away from an integer."""


def discriminant(r: int, s: int) -> int:
    """Delta = -16 (4 r^3 + 27 s^2), exact."""
    return -16 * (4 * r**3 + 27 * s**2)


@dataclass(frozen=True)
class Curve:
    r: int
    s: int
    delta: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", discriminant(self.r, self.s))

    @property
    def singular(self) -> bool:
        return self.delta == 0


@dataclass(frozen=True)
class TraceData:
    p: int
    ap: int
    bad: bool  # true iff p divides the discriminant of the minimal model

    def __post_init__(self):
        if self.ap * self.ap > 4 * self.p:
            raise ValueError(f"Hasse bound violated: a_{self.p} = {self.ap}")
        if self.bad and self.ap not in (-1, 0, 1):
            raise ValueError(f"bad prime {self.p} must have a_p in {{-1,0,1}}")


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_minimal(r: int, s: int) -> bool:
    """No prime p has p^4 | r and p^6 | s.  (0, 0) counts as non-minimal."""
    if r == 0 and s == 0:
        return False
    if r == 0:
        bound = round(abs(s) ** (1 / 6)) + 1
    elif s == 0:
        bound = round(abs(r) ** (1 / 4)) + 1
    else:
        bound = min(round(abs(r) ** (1 / 4)), round(abs(s) ** (1 / 6))) + 1
    for p in sieve_primes(bound):
        p4, p6 = p**4, p**6
        if r % p4 == 0 and s % p6 == 0:
            return False
    return True


def star_map(r: int, s: int) -> tuple[Curve, int]:
    """Maximal d with d^4 | r and d^6 | s, plus the minimal quotient curve."""
    if r == 0 and s == 0:
        raise ValueError("star_map undefined at (0, 0)")
    if r == 0:
        bound = round(abs(s) ** (1 / 6)) + 1
    elif s == 0:
        bound = round(abs(r) ** (1 / 4)) + 1
    else:
        bound = min(round(abs(r) ** (1 / 4)), round(abs(s) ** (1 / 6))) + 1
    d = 1
    for p in sieve_primes(bound):
        er = _valuation(r, p) // 4 if r != 0 else None
        es = _valuation(s, p) // 6 if s != 0 else None
        e = min(x for x in (er, es) if x is not None)
        d *= p**e
    return Curve(r // d**4, s // d**6), d


def sigma_p(r: int, s: int, p: int) -> int:
    """-sum_x ((x^3 + r x + s)/p) over x mod p; equals a_p for p >= 5."""
    if p < 5:
        raise ValueError("sigma_p requires p >= 5")
    tab = residue_table(p)
    x = np.arange(p, dtype=np.int64)
    f = ((x * x % p) * x % p + (r % p) * x + s % p) % p
    return -int(tab[f].sum())


def sigma_p_batch(r: np.ndarray, s: np.ndarray, p: int) -> np.ndarray:
    """sigma_p for many curves at once.

    Depends only on (r mod p, s mod p), so unique residue classes are
    evaluated once and scattered back.
    """
    if p < 5:
        raise ValueError("sigma_p_batch requires p >= 5")
    tab = residue_table(p).astype(np.int64)
    x = np.arange(p, dtype=np.int64)
    x3 = (x * x % p) * x % p
    codes = (np.asarray(r, dtype=np.int64) % p) * p + np.asarray(s, dtype=np.int64) % p
    uc, inv = np.unique(codes, return_inverse=True)
    ur, us = uc // p, uc % p
    out = np.empty(len(uc), dtype=np.int64)
    chunk = max(1, 4_000_000 // p)
    for i in range(0, len(uc), chunk):
        f = (x3[None, :] + ur[i : i + chunk, None] * x[None, :] + us[i : i + chunk, None]) % p
        out[i : i + chunk] = -tab[f].sum(axis=1)
    return out[inv]


@lru_cache(maxsize=64)
def _t_sum_table(p: int) -> np.ndarray:
    """g[v] = sum_t (t/p) e_p(t v), complex, by direct summation.

    The double sum of the trace formula regroups exactly as
    sum_x g[(x^3 + r x + s) mod p]; building g costs O(p^2) once per prime.
    """
    tab = residue_table(p).astype(np.float64)
    tv = np.arange(p, dtype=np.int64)
    phases = np.exp(2j * np.pi * (tv[:, None] * tv[None, :] % p) / p)
    g = (tab[:, None] * phases).sum(axis=0)
    g.setflags(write=False)
    return g


def sigma_p_charsum(r: int, s: int, p: int, tol: float = 1e-6) -> int:
    """Trace via the complex double sum -tau_p^{-1} sum_{t,x} (t/p) e_p(t(x^3+rx+s)).

    The t = 0 terms vanish since (0/p) = 0.  The result is rounded to the
    nearest integer; residuals beyond tol raise NumericalDriftError.
    """
    if p < 5:
        raise ValueError("sigma_p_charsum requires p >= 5")
    g = _t_sum_table(p)
    x = np.arange(p, dtype=np.int64)
    f = ((x * x % p) * x % p + (r % p) * x + s % p) % p
    val = -complex(g[f].sum()) / gauss_sum(p)
    n = round(val.real)
    if abs(val.imag) >= tol or abs(val.real - n) >= tol:
        raise NumericalDriftError(
            f"sigma_p_charsum residual too large at (r={r}, s={s}, p={p}): {val}"
        )
    return n


def ap(curve: Curve, p: int) -> TraceData:
    """Frobenius trace of a minimal nonsingular curve at p >= 5."""
    if curve.singular:
        raise ValueError("ap requires a nonsingular curve")
    if not is_minimal(curve.r, curve.s):
        raise ValueError(
            "ap requires a minimal model; apply star_map first "
            "(sigma_p of the unreduced curve is a different quantity)"
        )
    a = sigma_p(curve.r, curve.s, p)
    return TraceData(p=p, ap=a, bad=curve.delta % p == 0)


def c_pk(trace: TraceData, k: int) -> float:
    """Explicit-formula coefficient c_{p^k} for k in {1, 2}.

    k=1: -a_p / p in both good and bad cases.
    k=2: good reduction uses alpha^2 + conj(alpha)^2 = a_p^2 - 2p.
    """
    p, a = trace.p, trace.ap
    if k == 1:
        return -a / p
    if k == 2:
        if trace.bad:
            return -(a * a) / (2 * p * p)
        return -(a * a - 2 * p) / (2 * p * p)
    raise ValueError("c_pk supports k in {1, 2}")


def conductor_surrogate(curve: Curve, prime_hints: tuple[int, ...] = ()) -> int:
    """Documented conservative upper bound for the conductor.

    N = 2^8 * 3^5^[3 | Delta] * prod_{p >= 5, p | Delta} p^{f_p} with
    f_p = 1 when p does not divide r and f_p = 2 otherwise.  Exact local
    analysis at 2 and 3 is deliberately replaced by the worst-case
    exponents, so log(N) keeps the rank bound an upper bound.

    prime_hints may list known prime divisors of Delta (used for twisted
    curves whose discriminants are too large for blind trial division).
    """
    if curve.singular:
        raise ValueError("conductor_surrogate requires a nonsingular curve")
    rem = abs(curve.delta)
    cond = 2**8
    while rem % 2 == 0:
        rem //= 2
    if curve.delta % 3 == 0:
        cond *= 3**5
        while rem % 3 == 0:
            rem //= 3
    odd_primes = []
    for p in sorted(set(prime_hints)):
        if p >= 5 and is_prime(p) and rem % p == 0:
            odd_primes.append(p)
            while rem % p == 0:
                rem //= p
    d = 5
    while d * d <= rem:
        if rem % d == 0:
            odd_primes.append(d)
            while rem % d == 0:
                rem //= d
        d += 2 if d % 6 == 5 else 4
    if rem > 1:
        odd_primes.append(rem)
    for p in sorted(odd_primes):
        cond *= p if curve.r % p != 0 else p * p
    return cond
