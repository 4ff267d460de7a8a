"""Curve families, weighted counts and explicit-formula rank bounds.

The box family D(T) is all integer pairs |r| <= T^(1/3), |s| <= T^(1/2)
with nonzero discriminant; C(T) additionally demands minimality.  The
rank bound for one curve is

    rank <= log(N) / log X + (2 / log X) (U1 + U2) + C0 / log X,

with U1, U2 the weighted prime sums of the explicit formula.  The
unquantified O(1/log X) constant is exposed as C0 (default 0) and every
report carries a caveat line saying so.

Families are streamed or held as flat arrays; all aggregation uses
math.fsum in a fixed order so repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .arith import PrimeTable, sieve_primes
from .curves import Curve, ap, c_pk, conductor_surrogate, is_minimal, sigma_p_batch
from .weights import SmoothWeight, even_bump, h_X

__all__ = [
    "FamilyParams",
    "RankBoundReport",
    "CAVEAT",
    "int_root",
    "enumerate_D",
    "enumerate_C",
    "weight_wT",
    "S_T",
    "U1",
    "U2",
    "rank_bound",
    "average_rank_experiment",
    "lemma2_lhs",
]

CAVEAT = (
    "rank bounds omit an unquantified O(1/log X) constant; "
    "C0 is a configurable stand-in (default 0)"
)


def int_root(x: float, k: int) -> int:
    """floor(x^(1/k)) computed exactly for x >= 0."""
    if x < 0:
        raise ValueError("int_root requires x >= 0")
    n = int(round(x ** (1.0 / k)))
    while n**k > x:
        n -= 1
    while (n + 1) ** k <= x:
        n += 1
    return n


@dataclass(frozen=True)
class FamilyParams:
    T: float
    weight_r: SmoothWeight = field(default_factory=even_bump)
    weight_s: SmoothWeight = field(default_factory=even_bump)
    minimal_only: bool = True
    exclude_singular: bool = True

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("FamilyParams requires T >= 1")


def enumerate_D(T: float) -> Iterator[Curve]:
    """All curves in the box with Delta != 0, row-major in (r, s)."""
    if T < 1:
        raise ValueError("enumerate_D requires T >= 1")
    rmax, smax = int_root(T, 3), int_root(T, 2)
    for r in range(-rmax, rmax + 1):
        for s in range(-smax, smax + 1):
            if 4 * r**3 + 27 * s**2 != 0:
                yield Curve(r, s)


def enumerate_C(T: float) -> Iterator[Curve]:
    """enumerate_D(T) restricted to minimal models."""
    for cur in enumerate_D(T):
        if is_minimal(cur.r, cur.s):
            yield cur


def weight_wT(curve: Curve, params: FamilyParams) -> float:
    """w1(r / T^(1/3)) * w2(s / T^(1/2))."""
    T = params.T
    return float(params.weight_r(curve.r * T ** (-1 / 3))) * float(
        params.weight_s(curve.s * T ** (-1 / 2))
    )


# ---------------------------------------------------------------------------
# flat-array family grid (the batch workhorse)


def _family_grid(params: FamilyParams):
    """(R, S, W, delta) arrays for the curves inside the weight support.

    Applies the singularity / minimality filters demanded by params; curves
    with zero weight are dropped up front.
    """
    T = params.T
    rmax, smax = int_root(T, 3), int_root(T, 2)
    rv = np.arange(-rmax, rmax + 1, dtype=np.int64)
    sv = np.arange(-smax, smax + 1, dtype=np.int64)
    wr = np.asarray(params.weight_r(rv * T ** (-1 / 3)), dtype=np.float64)
    ws = np.asarray(params.weight_s(sv * T ** (-1 / 2)), dtype=np.float64)
    rv, wr = rv[wr > 0], wr[wr > 0]
    sv, ws = sv[ws > 0], ws[ws > 0]
    R = np.repeat(rv, len(sv))
    S = np.tile(sv, len(rv))
    W = np.repeat(wr, len(ws)) * np.tile(ws, len(rv))
    delta = -16 * (4 * R**3 + 27 * S**2)
    keep = np.ones(len(R), dtype=bool)
    if params.exclude_singular:
        keep &= delta != 0
    if params.minimal_only:
        for i, r in enumerate(rv):
            row = slice(i * len(sv), (i + 1) * len(sv))
            if r == 0:
                # p^4 | 0 for every p, so s must be free of sixth powers
                fourth = list(sieve_primes(int_root(smax, 6)))
                keep[row] &= S[row] != 0
            else:
                fourth = [p for p in sieve_primes(int_root(abs(int(r)), 4)) if r % p**4 == 0]
            for p in fourth:
                keep[row] &= S[row] % p**6 != 0
    return R[keep], S[keep], W[keep], delta[keep]


def S_T(params: FamilyParams) -> float:
    """Weighted count sum_{E in C} w_T(E)."""
    _, _, W, _ = _family_grid(params)
    return math.fsum(W.tolist())


# ---------------------------------------------------------------------------
# explicit-formula prime sums


def U1(curve: Curve, X: float, primes: PrimeTable) -> float:
    """-sum_{5 <= p <= X} (log p / p) h_X(log p) a_p(E)."""
    if X < 5:
        return 0.0
    terms = []
    for p in primes.in_range(5, X):
        t = ap(curve, p)
        terms.append(-(math.log(p) / p) * h_X(math.log(p), X) * t.ap)
    return math.fsum(terms)


def U2(curve: Curve, X: float, primes: PrimeTable) -> float:
    """sum_{p^2 <= X, p >= 5} c_{p^2}(E) (2 log p) h_X(2 log p)."""
    if X < 25:
        return 0.0
    terms = []
    for p in primes.in_range(5, math.sqrt(X)):
        t = ap(curve, p)
        terms.append(c_pk(t, 2) * 2 * math.log(p) * h_X(2 * math.log(p), X))
    return math.fsum(terms)


def rank_bound(curve: Curve, X: float, C0: float = 0.0, primes: PrimeTable | None = None) -> float:
    """log(N_surrogate)/log X + (2/log X)(U1 + U2) + C0/log X."""
    if primes is None:
        primes = sieve_primes(int(X))
    logX = math.log(X)
    n = conductor_surrogate(curve)
    return (
        math.log(n) / logX
        + (2.0 / logX) * (U1(curve, X, primes) + U2(curve, X, primes))
        + C0 / logX
    )


def _u_sums_batch(R, S, delta, X: float, primes: PrimeTable):
    """(U1, U2) arrays for a family, batched per prime."""
    n = len(R)
    u1 = np.zeros(n)
    u2 = np.zeros(n)
    for p in primes.in_range(5, X):
        sig = sigma_p_batch(R, S, p)
        lp = math.log(p)
        u1 -= (lp / p) * h_X(lp, X) * sig
        if p * p <= X:
            bad = delta % p == 0
            c = np.where(bad, -(sig * sig) / (2.0 * p * p), -(sig * sig - 2.0 * p) / (2.0 * p * p))
            u2 += c * 2.0 * lp * h_X(2.0 * lp, X)
    return u1, u2


def _conductor_batch(R: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """log of the conductor surrogate, vectorized over a family."""
    rem = np.abs(delta.copy())
    logn = np.full(len(delta), 8 * math.log(2))
    for _ in range(64):
        m = rem % 2 == 0
        if not m.any():
            break
        rem[m] //= 2
    three = delta % 3 == 0
    logn[three] += 5 * math.log(3)
    for _ in range(64):
        m = rem % 3 == 0
        if not m.any():
            break
        rem[m] //= 3
    top = int(rem.max()) if len(rem) else 1
    for p in sieve_primes(math.isqrt(top)):
        if p < 5:
            continue
        m = rem % p == 0
        if not m.any():
            continue
        exp = np.where(R[m] % p != 0, 1.0, 2.0)
        logn[m] += exp * math.log(p)
        while True:
            mm = rem % p == 0
            if not mm.any():
                break
            rem[mm] //= p
    left = rem > 1
    if left.any():
        exp = np.where(R[left] % rem[left] != 0, 1.0, 2.0)
        logn[left] += exp * np.log(rem[left].astype(np.float64))
    return logn


@dataclass
class RankBoundReport:
    """Per-curve rank-bound terms plus weighted family aggregates."""

    T: float
    X: float
    C0: float
    r: np.ndarray
    s: np.ndarray
    weight: np.ndarray
    logN_term: np.ndarray
    U1_term: np.ndarray
    U2_term: np.ndarray
    bound: np.ndarray
    S_T: float
    avg_logN_term: float
    avg_U1_term: float
    avg_U2_term: float
    avg_bound: float
    u1_over_logX: float  # weighted avg of raw U1, divided by log X
    u2_over_logX: float  # weighted avg of raw U2, divided by log X (near 1/4 in the limit)
    caveat: str = CAVEAT

    def iter_records(self):
        for i in range(len(self.r)):
            yield (
                int(self.r[i]),
                int(self.s[i]),
                float(self.logN_term[i]),
                float(self.U1_term[i]),
                float(self.U2_term[i]),
                float(self.bound[i]),
            )


def _wavg(w: np.ndarray, x: np.ndarray, wsum: float) -> float:
    return math.fsum((w * x).tolist()) / wsum


def average_rank_experiment(
    params: FamilyParams, X: float, C0: float = 0.0, primes: PrimeTable | None = None
) -> RankBoundReport:
    """Weighted averages of every rank-bound term over the minimal family."""
    if X > params.T ** (5 / 6):
        raise ValueError("average_rank_experiment requires X <= T^(5/6)")
    if primes is None:
        primes = sieve_primes(int(X))
    R, S, W, delta = _family_grid(params)
    if len(R) == 0:
        raise ValueError("empty family: weight support contains no lattice points")
    logX = math.log(X)
    u1, u2 = _u_sums_batch(R, S, delta, X, primes)
    logn = _conductor_batch(R, delta)
    logn_term = logn / logX
    u1_term = (2.0 / logX) * u1
    u2_term = (2.0 / logX) * u2
    bound = logn_term + u1_term + u2_term + C0 / logX
    wsum = math.fsum(W.tolist())
    return RankBoundReport(
        T=params.T,
        X=X,
        C0=C0,
        r=R,
        s=S,
        weight=W,
        logN_term=logn_term,
        U1_term=u1_term,
        U2_term=u2_term,
        bound=bound,
        S_T=wsum,
        avg_logN_term=_wavg(W, logn_term, wsum),
        avg_U1_term=_wavg(W, u1_term, wsum),
        avg_U2_term=_wavg(W, u2_term, wsum),
        avg_bound=_wavg(W, bound, wsum),
        u1_over_logX=_wavg(W, u1, wsum) / logX,
        u2_over_logX=_wavg(W, u2, wsum) / logX,
    )


def lemma2_lhs(params: FamilyParams, P: float, primes: PrimeTable) -> float:
    """sum_{P < p <= 2P} | sum_{E in D} w_T(E) sigma_p(E) |.

    The inner family is the unfiltered box (singular curves included), so
    the params passed here should normally have exclude_singular=False and
    minimal_only=False.
    """
    if P < 5:
        raise ValueError("lemma2_lhs requires P >= 5")
    R, S, W, _ = _family_grid(params)
    total = []
    for p in primes.in_range(P + 1, 2 * P):
        sig = sigma_p_batch(R, S, p)
        total.append(abs(math.fsum((W * sig).tolist())))
    return math.fsum(total)
