"""Command-line driver.

Subcommands: average-rank, density, twists, verify, cache.  Rows go to
CSV (schema-stable headers), aggregates to JSON; with a fixed
configuration every command writes byte-identical output regardless of
the --threads setting.  Configuration comes from flags plus an optional
JSON config file, with flags winning; environment variables are never
consulted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import cache as cache_mod
from . import families, moments, oracles, twists, weights
from .arith import sieve_primes
from .curves import Curve, sigma_p, sigma_p_charsum

__all__ = ["main", "load_curve_data"]

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_EMPTY_FAMILY = 3
EXIT_VERIFY_FAILED = 4

AVERAGE_RANK_HEADER = "r,s,logN_term,U1_term,U2_term,bound"
DENSITY_HEADER = "R,census,markov_bound,reference_decay"
TWISTS_HEADER = "D,sign,weight,logN_term,U1_term,U2_term,bound"


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    """Stable float formatting: repr round-trips and is locale-independent."""
    return repr(float(x))


def _write_json(path: Path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2, separators=(",", ": "))
        fh.write("\n")


def load_curve_data(path: str | Path) -> list[tuple[Curve, int, int]]:
    """Parse a curve-data file: one "r s N w" record per line.

    Blank lines and lines starting with '#' are skipped.  N is the known
    conductor, w the known root number (+-1).  Malformed records raise
    ConfigError naming the offending line.
    """
    out = []
    for ln, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"{path}:{ln}: expected 4 fields 'r s N w', got {len(parts)}")
        try:
            r, s, N, w = (int(x) for x in parts)
        except ValueError as exc:
            raise ConfigError(f"{path}:{ln}: non-integer field ({exc})") from exc
        cur = Curve(r, s)
        if cur.singular:
            raise ConfigError(f"{path}:{ln}: curve ({r}, {s}) is singular")
        if N < 1:
            raise ConfigError(f"{path}:{ln}: conductor must be positive")
        if w not in (-1, 1):
            raise ConfigError(f"{path}:{ln}: root number must be +-1")
        out.append((cur, N, w))
    if not out:
        raise ConfigError(f"{path}: no curve records found")
    return out


# ---------------------------------------------------------------------------
# config plumbing


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill unset (None) options from the JSON config file; flags win."""
    if not getattr(args, "config", None):
        return
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {args.config} must hold a JSON object")
    for key, val in data.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"config file {args.config}: unknown option {key!r}")
        if getattr(args, attr) is None:
            setattr(args, attr, val)


def _require(args: argparse.Namespace, *names: str) -> None:
    for n in names:
        if getattr(args, n) is None:
            raise ConfigError(f"missing required option --{n.replace('_', '-')}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_average_rank(args) -> int:
    _require(args, "T", "X", "out_csv", "out_json")
    C0 = float(args.C0 or 0.0)
    try:
        params = families.FamilyParams(T=float(args.T))
        report = families.average_rank_experiment(params, float(args.X), C0)
    except ValueError as exc:
        if "empty family" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_EMPTY_FAMILY
        raise ConfigError(str(exc)) from exc
    with open(args.out_csv, "w", newline="\n") as fh:
        fh.write(AVERAGE_RANK_HEADER + "\n")
        for r, s, lt, u1, u2, b in report.iter_records():
            fh.write(f"{r},{s},{_fmt(lt)},{_fmt(u1)},{_fmt(u2)},{_fmt(b)}\n")
    n = len(report.r)
    _write_json(
        Path(args.out_json),
        {
            "T": report.T,
            "X": report.X,
            "C0": report.C0,
            "n_curves": n,
            "S_T": report.S_T,
            "avg_logN_term": report.avg_logN_term,
            "avg_U1_term": report.avg_U1_term,
            "avg_U2_term": report.avg_U2_term,
            "avg_bound": report.avg_bound,
            "u1_over_logX": report.u1_over_logX,
            "u2_over_logX": report.u2_over_logX,
            "mean_logN_term": math.fsum(report.logN_term.tolist()) / n,
            "mean_U1_term": math.fsum(report.U1_term.tolist()) / n,
            "mean_U2_term": math.fsum(report.U2_term.tolist()) / n,
            "mean_bound": math.fsum(report.bound.tolist()) / n,
            "caveat": report.caveat,
        },
    )
    return EXIT_OK


def cmd_density(args) -> int:
    _require(args, "T", "X", "out_csv", "out_json")
    C0 = float(args.C0 or 0.0)
    R_max = int(args.R_max if args.R_max is not None else 8)
    try:
        report = moments.high_rank_census(float(args.T), float(args.X), C0, R_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    with open(args.out_csv, "w", newline="\n") as fh:
        fh.write(DENSITY_HEADER + "\n")
        for row in report.rows:
            mb = "" if row.markov_bound is None else _fmt(row.markov_bound)
            fh.write(f"{row.R},{row.census},{mb},{_fmt(row.reference)}\n")
    _write_json(
        Path(args.out_json),
        {
            "T": report.T,
            "X": report.X,
            "C0": report.C0,
            "n_C": report.n_C,
            "n_D": report.n_D,
            "rank_cutoff": report.rank_cutoff,
        },
    )
    return EXIT_OK


def cmd_twists(args) -> int:
    _require(args, "T", "X", "out_csv", "out_json")
    C0 = float(args.C0 or 0.0)
    if args.curve_file:
        bases = load_curve_data(args.curve_file)
        idx = int(args.base_index or 0)
        if not 0 <= idx < len(bases):
            raise ConfigError(f"base index {idx} out of range for {args.curve_file}")
        base, N, w = bases[idx]
    else:
        _require(args, "r", "s", "N", "w")
        base = Curve(int(args.r), int(args.s))
        N, w = int(args.N), int(args.w)
        if base.singular:
            raise ConfigError(f"base curve ({base.r}, {base.s}) is singular")
        if w not in (-1, 1):
            raise ConfigError("base root number must be +-1")
    T, X = float(args.T), float(args.X)
    weight = weights.bump(0.5, 1.0)
    neg_weight = weights.bump(-1.0, -0.5)
    reports = {}
    for sign in (1, -1):
        rep_pos = twists.twist_average_experiment(
            twists.TwistFamily(base=base, N=N, w=w, sign=sign, weight=weight), T, X, C0
        )
        rep_neg = twists.twist_average_experiment(
            twists.TwistFamily(base=base, N=N, w=w, sign=sign, weight=neg_weight), T, X, C0
        )
        reports[sign] = (rep_pos, rep_neg)
    with open(args.out_csv, "w", newline="\n") as fh:
        fh.write(TWISTS_HEADER + "\n")
        rows = []
        for sign, pair in reports.items():
            for rep in pair:
                for i in range(len(rep.D)):
                    rows.append(
                        (
                            int(rep.D[i]),
                            sign,
                            float(rep.weight[i]),
                            float(rep.logN_term[i]),
                            float(rep.U1_raw[i]),
                            float(rep.U2_raw[i]),
                            float(rep.bound[i]),
                        )
                    )
        rows.sort()
        for D, sign, wv, lt, u1, u2, b in rows:
            fh.write(
                f"{D},{sign},{_fmt(wv)},{_fmt(lt)},{_fmt(u1)},{_fmt(u2)},{_fmt(b)}\n"
            )
    # partition check: the two signed weight totals must exhaust the
    # unsigned total over all admissible discriminants
    unsigned_total = 0.0
    for wgt in (weight, neg_weight):
        for D in twists.fundamental_discriminants(
            wgt.support[0] * T, wgt.support[1] * T
        ):
            if math.gcd(D, N) != 1:
                continue
            unsigned_total += float(wgt(D / T))
    W_plus = math.fsum(r.W_total for r in reports[1])
    W_minus = math.fsum(r.W_total for r in reports[-1])
    avg_plus = math.fsum(
        r.W_total * r.avg_bound for r in reports[1] if not r.empty
    ) / W_plus if W_plus > 0 else math.nan
    avg_minus = math.fsum(
        r.W_total * r.avg_bound for r in reports[-1] if not r.empty
    ) / W_minus if W_minus > 0 else math.nan
    if W_plus > 0 and W_minus > 0:
        prop0, prop1 = twists.theorem4_proportions(max(avg_plus, 0.0), max(avg_minus, 0.0))
    else:
        prop0 = prop1 = math.nan
    class_map = {}
    for pair in reports.values():
        for rep in pair:
            for triple, signs in rep.class_sign_map.items():
                key = f"{triple[0]},{triple[1]},{triple[2]}"
                class_map.setdefault(key, set()).update(signs)
    _write_json(
        Path(args.out_json),
        {
            "T": T,
            "X": X,
            "C0": C0,
            "base": {"r": base.r, "s": base.s, "N": N, "w": w},
            "W_plus": W_plus,
            "W_minus": W_minus,
            "W_unsigned": unsigned_total,
            "partition_gap": abs(unsigned_total - W_plus - W_minus),
            "avg_bound_plus": avg_plus,
            "avg_bound_minus": avg_minus,
            "proportion_rank0_lower": prop0,
            "proportion_rank1_lower": prop1,
            "class_sign_map": {k: sorted(v) for k, v in sorted(class_map.items())},
        },
    )
    if W_plus == 0 and W_minus == 0:
        print("error: empty twist family", file=sys.stderr)
        return EXIT_EMPTY_FAMILY
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _suite_traces() -> bool:
    primes = sieve_primes(50)
    for r in range(-4, 5):
        for s in range(-4, 5):
            for p in primes.in_range(5, 50):
                if sigma_p(r, s, p) != sigma_p_charsum(r, s, p):
                    return False
                if sigma_p(r, s, p) ** 2 > 4 * p:
                    return False
    return True


def _suite_ramanujan() -> bool:
    for b in range(1, 40):
        for a in range(-10, 11):
            if oracles.ramanujan_exponential_oracle(a, b) != int(
                oracles.ramanujan_divisor_sweep([a], b)[0]
            ):
                return False
    return True


def _suite_gcd_sum() -> bool:
    if oracles.gcd_sum_S(1, 1).total != 3 or oracles.gcd_sum_S(2, 2).total != 29:
        return False
    a = oracles.gcd_sum_S(7, 9, order="uvw").total
    b = oracles.gcd_sum_S(7, 9, order="vwu").total
    return a == b


def _suite_floor_inequality() -> bool:
    return all(
        oracles.floor_inequality(e, f) for e in range(0, 80) for f in range(0, e + 1)
    )


def _suite_fejer() -> bool:
    tw = weights.triangular_weight()
    for t in (0.0, 0.3, 1.2, -2.7):
        if abs(weights.fourier_numeric(tw, t).real - weights.h_hat(t)) > 1e-8:
            return False
    import numpy as np

    ts = np.linspace(-30, 30, 2001)
    return bool((weights.h_hat(ts) >= 0).all()) and weights.h_hat(0.0) == 1.0


def _suite_kernel() -> bool:
    for X in (10.0, 100.0):
        plateau = 1.0 / math.log(X) ** 2
        for t in (0.0, 0.5 * (1 - 1 / X), 1 - 1 / X):
            if weights.kernel_k(t, X) != plateau:
                return False
    return True


def _suite_cache(tmpdir: Path) -> bool:
    c = cache_mod.cache_build(8, 20)
    path = tmpdir / "verify.apcache"
    cache_mod.cache_save(c, path)
    loaded = cache_mod.cache_load(path)
    if len(loaded) != len(c) or not (loaded.records == c.records).all():
        return False
    # fault injection: a corrupted a_p must be rejected by the Hasse check
    raw = bytearray(path.read_bytes())
    raw[-8:] = (10**6).to_bytes(8, "little", signed=True)
    bad = tmpdir / "corrupt.apcache"
    bad.write_bytes(bytes(raw))
    try:
        cache_mod.cache_load(bad)
    except cache_mod.CorruptCacheError:
        return True
    return False


def _suite_sieve_indicator() -> bool:
    T, N = 1e10, 1
    cut = math.log(math.log(T))
    ps = [p for p in sieve_primes(int(cut)) if p > 2]
    for n in range(1, 600, 2):
        direct = 0 if any(n % (p * p) == 0 for p in ps) else 1
        if twists.sieve_indicator_X(n, T, N) != direct:
            return False
    return True


def _suite_poisson() -> bool:
    w = weights.bump(1.0, 2.0)
    try:
        twists.poisson_twist_check(w, 1, 5, 200.0)
        twists.poisson_twist_check(w, 8, 5, 200.0)
    except twists.IdentityViolatedError:
        return False
    return True


def cmd_verify(args) -> int:
    import tempfile

    suites = [
        ("traces", _suite_traces),
        ("ramanujan", _suite_ramanujan),
        ("gcd-sum", _suite_gcd_sum),
        ("floor-inequality", _suite_floor_inequality),
        ("fejer", _suite_fejer),
        ("kernel", _suite_kernel),
        ("sieve-indicator", _suite_sieve_indicator),
        ("poisson", _suite_poisson),
    ]
    failed = []
    with tempfile.TemporaryDirectory() as td:
        suites.append(("cache", lambda: _suite_cache(Path(td))))
        for name, fn in suites:
            ok = fn()
            print(f"{'PASS' if ok else 'FAIL'} {name}")
            if not ok:
                failed.append(name)
    if failed:
        print("failing suites: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_cache(args) -> int:
    if args.cache_cmd == "build":
        _require(args, "T", "X", "out")
        c = cache_mod.cache_build(float(args.T), float(args.X))
        cache_mod.cache_save(c, args.out)
        print(f"wrote {len(c)} records to {args.out}")
        return EXIT_OK
    if args.cache_cmd == "check":
        _require(args, "path")
        try:
            c = cache_mod.cache_load(args.path)
        except cache_mod.CorruptCacheError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VERIFY_FAILED
        print(f"ok: {len(c)} records")
        return EXIT_OK
    raise ConfigError("cache requires a sub-action: build or check")


# ---------------------------------------------------------------------------
# parser


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON config file; explicit flags win")
    sp.add_argument("--threads", type=int, default=None, help="worker pool size (never affects outputs)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avgrank")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("average-rank", help="explicit-formula rank-bound averages over the box family")
    p.add_argument("--T", type=float)
    p.add_argument("--X", type=float)
    p.add_argument("--C0", type=float)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    _add_common(p)
    p.set_defaults(fn=cmd_average_rank)

    p = sub.add_parser("density", help="high rank-bound census and moment density bounds")
    p.add_argument("--T", type=float)
    p.add_argument("--X", type=float)
    p.add_argument("--C0", type=float)
    p.add_argument("--R-max", type=int, dest="R_max")
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    _add_common(p)
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("twists", help="quadratic-twist rank-bound averages per root-number class")
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--curve-file", help="curve-data file: lines 'r s N w'")
    p.add_argument("--base-index", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--X", type=float)
    p.add_argument("--C0", type=float)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")
    _add_common(p)
    p.set_defaults(fn=cmd_twists)

    p = sub.add_parser("verify", help="run the oracle and identity suites")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("cache", help="build or validate a binary a_p cache")
    p.add_argument("cache_cmd", choices=["build", "check"])
    p.add_argument("--T", type=float)
    p.add_argument("--X", type=float)
    p.add_argument("--out")
    p.add_argument("--path")
    _add_common(p)
    p.set_defaults(fn=cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args, parser)
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
