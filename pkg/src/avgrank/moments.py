"""Moment method for the density of high-rank curves.

V(E, X) is the weighted trace sum over primes 100 < p <= X.  Summing
|V|^(2k) over the box family and applying Markov's inequality bounds the
proportion of curves whose explicit-formula bound can exceed a rank
threshold R; the reference decay curve (3R/2)^(-R/12) is reported
alongside for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .arith import PrimeTable, sieve_primes
from .curves import Curve, sigma_p, sigma_p_batch
from .families import enumerate_C, enumerate_D, int_root, rank_bound
from .weights import h_X

__all__ = [
    "TermType",
    "MomentReport",
    "CensusRow",
    "V",
    "V_family",
    "moment_2k",
    "density_bound",
    "type1_S",
    "multinomial_C",
    "classify_type",
    "reference_decay",
    "high_rank_census",
]


class TermType(Enum):
    TYPE_I = "I"  # every exponent is 0 or >= 2
    TYPE_II = "II"  # some exponent equals 1


def V(curve: Curve, X: float, primes: PrimeTable) -> float:
    """sum_{100 < p <= X} (log p / p) h_X(log p) sigma_p(E)."""
    if curve.singular:
        raise ValueError("V requires Delta != 0")
    terms = []
    for p in primes.in_range(101, X):
        terms.append(
            (math.log(p) / p) * h_X(math.log(p), X) * sigma_p(curve.r, curve.s, p)
        )
    return math.fsum(terms)


def _box_arrays(T: float):
    rmax, smax = int_root(T, 3), int_root(T, 2)
    rv = np.arange(-rmax, rmax + 1, dtype=np.int64)
    sv = np.arange(-smax, smax + 1, dtype=np.int64)
    R = np.repeat(rv, len(sv))
    S = np.tile(sv, len(rv))
    keep = 4 * R**3 + 27 * S**2 != 0
    return R[keep], S[keep]


def V_family(T: float, X: float, primes: PrimeTable) -> np.ndarray:
    """V(E, X) for every curve of D(T), in row-major (r, s) order."""
    R, S = _box_arrays(T)
    out = np.zeros(len(R))
    for p in primes.in_range(101, X):
        out += (math.log(p) / p) * h_X(math.log(p), X) * sigma_p_batch(R, S, p)
    return out


def moment_2k(T: float, X: float, k: int, primes: PrimeTable | None = None) -> float:
    """sum_{E in D(T)} V(E, X)^(2k), summed in a fixed order.

    math.fsum gives correctly rounded accumulation, which covers the
    wide dynamic range of the V^(2k) terms.
    """
    if k < 1:
        raise ValueError("moment_2k requires k >= 1")
    if primes is None:
        primes = sieve_primes(int(X))
    vals = V_family(T, X, primes)
    return math.fsum((vals ** (2 * k)).tolist())


def count_C(T: float) -> int:
    return sum(1 for _ in enumerate_C(T))


def density_bound(
    T: float, X: float, k: int, R: float, primes: PrimeTable | None = None
) -> float:
    """Markov bound moment_2k / ((log T / 2)^(2k) * #C(T)) for rank >= R.

    Only meaningful when R >= 3 + 2 log T / log X, the regime where the
    explicit formula forces |V| >= (log T) / 2.
    """
    if R < 3 + 2 * math.log(T) / math.log(X):
        raise ValueError("density_bound requires R >= 3 + 2 log T / log X")
    m = moment_2k(T, X, k, primes)
    return m / ((0.5 * math.log(T)) ** (2 * k) * count_C(T))


def type1_S(X: float, primes: PrimeTable | None = None) -> float:
    """S = sum_{100 < p <= X} (2 h_X(log p) log p)^2 / p; tends to (log^2 X)/3."""
    if X <= 100:
        return 0.0
    if primes is None:
        primes = sieve_primes(int(X))
    p = primes.array()
    p = p[(p > 100) & (p <= X)]
    lp = np.log(p.astype(np.float64))
    terms = (2.0 * h_X(lp, X) * lp) ** 2 / p
    return math.fsum(terms.tolist())


def multinomial_C(e: Sequence[int]) -> int:
    """(2k)! / prod(e_p!) for an exponent vector summing to 2k."""
    if any(x < 0 for x in e):
        raise ValueError("exponents must be nonnegative")
    total = sum(e)
    if total % 2 != 0 or total == 0:
        raise ValueError("exponent vector must sum to a positive even integer")
    out = math.factorial(total)
    for x in e:
        out //= math.factorial(x)
    return out


def classify_type(e: Sequence[int]) -> TermType:
    """Type I iff no exponent equals exactly 1."""
    return TermType.TYPE_II if any(x == 1 for x in e) else TermType.TYPE_I


def reference_decay(R: int) -> float:
    """(3R/2)^(-R/12); the faster-than-exponential reference curve."""
    if R == 0:
        return 1.0
    return (1.5 * R) ** (-R / 12.0)


def optimal_k(R: int) -> int:
    """k = floor((R - 3) / 12), clamped to at least 1."""
    return max(1, (R - 3) // 12)


@dataclass(frozen=True)
class CensusRow:
    R: int
    census: int  # curves in C(T) whose rank_bound proxy is >= R
    markov_bound: float | None  # Markov density bound at the optimal k, if admissible
    reference: float


@dataclass(frozen=True)
class MomentReport:
    T: float
    X: float
    C0: float
    rows: tuple[CensusRow, ...]
    rank_cutoff: float  # 11 log T / log log T
    n_C: int
    n_D: int


def high_rank_census(
    T: float, X: float, C0: float = 0.0, R_max: int = 8, primes: PrimeTable | None = None
) -> MomentReport:
    """Proxy census of high rank-bound curves plus Markov density bounds.

    The census thresholds the explicit-formula rank bound (true analytic
    ranks are out of reach); the Markov column uses the |V| moment
    mechanism with k and X chosen as in the density analysis.
    """
    if primes is None:
        primes = sieve_primes(int(X))
    bounds = [rank_bound(cur, X, C0, primes) for cur in enumerate_C(T)]
    n_C = len(bounds)
    n_D = sum(1 for _ in enumerate_D(T))
    rows = []
    for R in range(0, R_max + 1):
        census = sum(1 for b in bounds if b >= R)
        k = optimal_k(R)
        XR = T ** (1.0 / (6 * k))
        markov = None
        if XR >= 2 and R >= 3 + 2 * math.log(T) / math.log(XR):
            mp = sieve_primes(int(XR)) if XR > primes.limit else primes
            markov = density_bound(T, XR, k, R, mp)
        rows.append(CensusRow(R=R, census=census, markov_bound=markov, reference=reference_decay(R)))
    cutoff = 11 * math.log(T) / math.log(math.log(T))
    return MomentReport(T=T, X=X, C0=C0, rows=tuple(rows), rank_cutoff=cutoff, n_C=n_C, n_D=n_D)
