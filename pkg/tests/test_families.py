import math

import numpy as np
import pytest

from avgrank.arith import sieve_primes
from avgrank.curves import Curve, ap, c_pk, conductor_surrogate, is_minimal, sigma_p
from avgrank.families import (
    CAVEAT,
    FamilyParams,
    S_T,
    U1,
    U2,
    _family_grid,
    average_rank_experiment,
    enumerate_C,
    enumerate_D,
    int_root,
    lemma2_lhs,
    rank_bound,
    weight_wT,
)
from avgrank.weights import h_X, plateau_bump


def test_int_root():
    assert int_root(64, 3) == 4
    assert int_root(63.9, 3) == 3
    assert int_root(10**12, 2) == 10**6
    assert int_root(0, 5) == 0
    # float-rounding hazard: (10^6)^2 stays exact
    assert int_root((10**6) ** 2 - 1, 2) == 10**6 - 1


def test_enumerate_D_count_and_filter():
    curves = list(enumerate_D(64.0))
    assert len(curves) == 150
    assert all(not c.singular for c in curves)
    rmax, smax = int_root(64, 3), int_root(64, 2)
    assert rmax == 4 and smax == 8
    # row-major ordering
    assert (curves[0].r, curves[0].s) == (-4, -8)
    assert all(abs(c.r) <= 4 and abs(c.s) <= 8 for c in curves)


def test_enumerate_C_subset():
    D = set((c.r, c.s) for c in enumerate_D(10**4))
    C = set((c.r, c.s) for c in enumerate_C(10**4))
    assert C <= D
    assert all(is_minimal(r, s) for r, s in C)
    assert all(not is_minimal(r, s) for r, s in D - C)
    # (16, 64) sits in the box at T = 10^4 but is non-minimal
    assert (16, 64) in D - C


def test_weight_wT_and_S_T():
    params = FamilyParams(T=10**4)
    total = math.fsum(
        weight_wT(c, params) for c in enumerate_C(10**4)
    )
    assert abs(total - S_T(params)) < 1e-9
    assert S_T(params) > 0


def test_family_grid_respects_filters():
    params = FamilyParams(T=5000.0)
    R, S, W, delta = _family_grid(params)
    assert (delta != 0).all()
    assert (W > 0).all()
    for i in range(len(R)):
        assert is_minimal(int(R[i]), int(S[i]))
        assert delta[i] == -16 * (4 * int(R[i]) ** 3 + 27 * int(S[i]) ** 2)
    # against the streaming enumeration with the same weight threshold
    direct = {
        (c.r, c.s)
        for c in enumerate_C(5000.0)
        if weight_wT(c, params) > 0
    }
    assert direct == set(zip(R.tolist(), S.tolist()))


def test_U1_two_term_hand_value():
    # E_{1,0}, X = 10: only p = 5, 7 contribute
    cur = Curve(1, 0)
    primes = sieve_primes(10)
    a5, a7 = sigma_p(1, 0, 5), sigma_p(1, 0, 7)
    want = -(
        (math.log(5) / 5) * h_X(math.log(5), 10.0) * a5
        + (math.log(7) / 7) * h_X(math.log(7), 10.0) * a7
    )
    assert abs(U1(cur, 10.0, primes) - want) < 1e-12
    assert U1(cur, 4.0, primes) == 0.0


def test_U2_single_term_hand_value():
    # E_{1,0}, X = 30: single term p = 5 with c_25 = 0.12
    cur = Curve(1, 0)
    primes = sieve_primes(30)
    want = 0.12 * 2 * math.log(5) * h_X(2 * math.log(5), 30.0)
    assert abs(U2(cur, 30.0, primes) - want) < 1e-12
    assert U2(cur, 24.0, primes) == 0.0


def test_rank_bound_assembly():
    cur = Curve(1, 0)
    X = 100.0
    primes = sieve_primes(100)
    manual = (
        math.log(conductor_surrogate(cur)) / math.log(X)
        + (2.0 / math.log(X)) * (U1(cur, X, primes) + U2(cur, X, primes))
    )
    assert abs(rank_bound(cur, X) - manual) < 1e-12
    assert abs(rank_bound(cur, X, C0=3.0) - manual - 3.0 / math.log(X)) < 1e-12


def test_average_rank_experiment_consistency():
    params = FamilyParams(T=2000.0)
    X = 50.0
    rep = average_rank_experiment(params, X)
    assert rep.caveat == CAVEAT
    primes = sieve_primes(50)
    logX = math.log(X)
    # spot-check five curves against the scalar path
    for i in range(0, len(rep.r), max(1, len(rep.r) // 5)):
        cur = Curve(int(rep.r[i]), int(rep.s[i]))
        assert abs(rep.U1_term[i] - (2 / logX) * U1(cur, X, primes)) < 1e-10
        assert abs(rep.U2_term[i] - (2 / logX) * U2(cur, X, primes)) < 1e-10
        assert abs(rep.logN_term[i] - math.log(conductor_surrogate(cur)) / logX) < 1e-10
        assert abs(rep.bound[i] - rank_bound(cur, X, 0.0, primes)) < 1e-10
    # weighted averages recompute
    wsum = math.fsum(rep.weight.tolist())
    assert abs(wsum - rep.S_T) < 1e-12
    assert abs(rep.avg_bound - math.fsum((rep.weight * rep.bound).tolist()) / wsum) < 1e-12


def test_average_rank_experiment_validation():
    with pytest.raises(ValueError, match="X <="):
        average_rank_experiment(FamilyParams(T=100.0), 1000.0)
    tiny = FamilyParams(
        T=2.0,
        weight_r=plateau_bump(0.4, 0.45, 0.41, 0.44),
        weight_s=plateau_bump(0.4, 0.45, 0.41, 0.44),
    )
    with pytest.raises(ValueError, match="empty family"):
        average_rank_experiment(tiny, 1.7)


def test_lemma2_lhs_small():
    params = FamilyParams(T=500.0, minimal_only=False, exclude_singular=False)
    primes = sieve_primes(30)
    val = lemma2_lhs(params, 10.0, primes)
    assert val >= 0
    # direct recomputation
    R, S, W, _ = _family_grid(params)
    total = 0.0
    for p in [11, 13, 17, 19]:
        inner = math.fsum(
            W[i] * sigma_p(int(R[i]), int(S[i]), p) for i in range(len(R))
        )
        total += abs(inner)
    assert abs(val - total) < 1e-9
