"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run ``python tests/test_acceptance.py`` for the summary lines alone, or
``pytest tests/test_acceptance.py -v``; each test prints its line to the
terminal even under output capture.

Pinned tolerances: criterion 3 compares with relative error 1e-9; every
other comparison is exact rational equality.  Time budgets are asserted.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from gamegen import random_game  # noqa: E402
from spoa.bounds import (  # noqa: E402
    WelfareCurve, restricted_design_value, spoa_bound, spoa_curve,
)
from spoa.cli import main as cli_main  # noqa: E402
from spoa.combinatorics import coalition_coefficient, index_set  # noqa: E402
from spoa.games import (  # noqa: E402
    brute_force_spoa, deviation_sum_from_labels, deviation_sum_oracle, enumerate_ksne, is_k_strong_ne,
    label_resources, run_dynamics,
)
from spoa.worstcase import certify_tightness  # noqa: E402

REL_TOL = Fraction(1, 10**9)
ORACLE_GAMES = 500
ORACLE_SEED = 20240601


def covering_closed_form(n: int) -> Fraction:
    """1 - 1/(1/((n-1)(n-1)!) + sum_{j=0}^{n-1} 1/j!), computed here from scratch."""
    total = Fraction(1, (n - 1) * math.factorial(n - 1))
    for j in range(n):
        total += Fraction(1, math.factorial(j))
    return 1 - 1 / total


def _cli_json(argv):
    import io
    import json
    from contextlib import redirect_stdout
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(argv)
    return code, json.loads(buf.getvalue()) if code == 0 else None


def criterion_1():
    start = time.perf_counter()
    code, data = _cli_json(["bound", "--n", "20", "--welfare", "indicator", "--k", "1"])
    elapsed = time.perf_counter() - start
    spoa = Fraction(data["spoa"]["exact"]) if data else None
    ok = code == 0 and spoa == Fraction(1, 2) and elapsed < 10
    return ok, f"bound n=20 k=1 spoa={spoa} (want 1/2 exactly) in {elapsed:.1f}s (< 10s)"


def criterion_2():
    start = time.perf_counter()
    values = {n: spoa_bound(n, WelfareCurve.indicator(n), n).primal_value for n in range(2, 9)}
    small = time.perf_counter() - start
    start = time.perf_counter()
    p20 = spoa_bound(20, WelfareCurve.indicator(20), 20).primal_value
    big = time.perf_counter() - start
    ok = all(v == 1 for v in values.values()) and p20 == 1 and big < 600
    shown = ",".join(str(v) for v in values.values())
    return ok, f"P*(n,n) for n=2..8 = [{shown}] in {small:.1f}s; P*(20,20)={p20} in {big:.1f}s (< 600s)"


def criterion_3():
    start = time.perf_counter()
    code, data = _cli_json(["design", "--n", "20", "--welfare", "indicator", "--k", "1"])
    elapsed = time.perf_counter() - start
    expected = covering_closed_form(20)
    got = Fraction(data["spoa"]["exact"]) if data else None
    rel = abs(got - expected) / expected if got is not None else None
    ok = code == 0 and rel is not None and rel <= REL_TOL
    return ok, (f"design n=20 k=1 spoa~{float(got):.12f} vs closed form {float(expected):.12f}, "
                f"relative error {float(rel):.1e} (<= 1e-9) in {elapsed:.1f}s")


_curve_cache = {}


def criterion_4():
    start = time.perf_counter()
    table = spoa_curve(20, WelfareCurve.indicator(20), range(1, 21), include_design=True)
    elapsed = time.perf_counter() - start
    _curve_cache["n20"] = table
    ws = [r.spoa for r in table.rows]
    ds = [r.design_spoa for r in table.rows]
    monotone = all(a <= b for a, b in zip(ws, ws[1:])) and all(a <= b for a, b in zip(ds, ds[1:]))
    dominates = all(d >= s for d, s in zip(ds, ws))
    ends = ws[-1] == 1 and ds[-1] == 1
    ok = monotone and dominates and ends and elapsed < 900
    return ok, (f"n=20 curve: non-decreasing={monotone}, design>=sharing={dominates}, "
                f"both 1 at k=20={ends}, k=1 ({ws[0]}, {float(ds[0]):.6f}) in {elapsed:.0f}s (< 900s)")


def criterion_5():
    start = time.perf_counter()
    parts, ok = [], True
    for n, k in [(2, 1), (3, 1), (3, 2)]:
        cert, _ = certify_tightness(n, WelfareCurve.indicator(n), k, verify_equilibrium=True)
        good = cert.constructed_ratio == 1 / cert.lp_value and cert.equilibrium_verified is True
        ok &= good
        parts.append(f"({n},{k}) ratio={cert.constructed_ratio} P*={cert.lp_value} ne={cert.equilibrium_verified}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    return ok, "; ".join(parts) + f" in {elapsed:.1f}s (< 60s)"


def criterion_6():
    start = time.perf_counter()
    rng = random.Random(ORACLE_SEED)
    bound_cache = {}
    failures = {"a": 0, "b": 0, "c": 0}
    checks = {"a": 0, "b": 0, "c": 0}
    for _ in range(ORACLE_GAMES):
        game = random_game(rng, max_players=3, max_resources=4, max_actions=2)
        n, w = game.n, game.welfare_curve
        actions = list(game.joint_actions())
        for a_ne, a_opt in itertools.product(actions, repeat=2):
            theta = label_resources(game, a_ne, a_opt)
            for zeta in range(1, n + 1):
                checks["a"] += 1
                if deviation_sum_oracle(game, a_ne, a_opt, zeta) != deviation_sum_from_labels(theta, zeta, w):
                    failures["a"] += 1
        equilibria = {}
        for k in range(1, n + 1):
            key = (w, k)
            if key not in bound_cache:
                bound_cache[key] = spoa_bound(n, w, k).spoa
            checks["b"] += 1
            if brute_force_spoa(game, k) < bound_cache[key]:
                failures["b"] += 1
            equilibria[k] = set(enumerate_ksne(game, k))
            for a0 in actions:
                for mode, seed in (("deterministic", None), ("asynchronous", rng.randrange(2**31))):
                    checks["c"] += 1
                    if not is_k_strong_ne(game, run_dynamics(game, a0, k, mode, seed).final, k):
                        failures["c"] += 1
        for k in range(1, n):
            for kp in range(k + 1, n + 1):
                checks["c"] += 1
                if not equilibria[kp] <= equilibria[k]:
                    failures["c"] += 1
    elapsed = time.perf_counter() - start
    ok = not any(failures.values()) and elapsed < 300
    summary = ", ".join(f"({p}) {checks[p] - failures[p]}/{checks[p]}" for p in "abc")
    return ok, f"{ORACLE_GAMES} random games: {summary} in {elapsed:.0f}s (< 300s)"


def criterion_7():
    start = time.perf_counter()
    identity_ok, count = True, 0
    for n in range(1, 9):
        for lab in index_set(n):
            for zeta in range(1, n + 1):
                total = sum(coalition_coefficient(lab, zeta, n, a, b)
                            for a in range(zeta + 1) for b in range(zeta - a + 1))
                count += 1
                identity_ok &= total == math.perm(n, zeta)
    restricted_ok, pairs = True, 0
    for n in range(1, 7):
        harmonic = WelfareCurve([sum((Fraction(1, i) for i in range(1, j + 1)), Fraction(0)) for j in range(n + 1)])
        for w in (WelfareCurve.indicator(n), harmonic):
            for k in range(1, n + 1):
                pairs += 1
                restricted_ok &= restricted_design_value(n, w, k) == spoa_bound(n, w, k).primal_value
    elapsed = time.perf_counter() - start
    ok = identity_ok and restricted_ok and elapsed < 120
    return ok, (f"coefficient sums = n^(zeta) on {count} (label, zeta) cases: {identity_ok}; "
                f"restricted design = P* on {pairs} (n, w, k) cases: {restricted_ok}; in {elapsed:.1f}s (< 120s)")


def criterion_8():
    start = time.perf_counter()
    bad = []
    for n in range(1, 21):
        w = WelfareCurve.identity(n)
        for k in range(1, n + 1):
            if spoa_bound(n, w, k).spoa != 1:
                bad.append((n, k))
    brute = []
    rng = random.Random(ORACLE_SEED + 8)
    for _ in range(100):
        game = random_game(rng, max_players=3)
        game = type(game)(game.resources, [[game.action_ids(p, q) for q in range(len(acts))]
                                           for p, acts in enumerate(game.actions)], WelfareCurve.identity(game.n))
        brute.extend(brute_force_spoa(game, k) for k in range(1, game.n + 1))
    elapsed = time.perf_counter() - start
    ok = not bad and all(v == 1 for v in brute)
    return ok, (f"identity welfare: spoa=1 for all k at n<=20 (failures {bad}); "
                f"brute force on {len(brute)} (game, k) pairs with n<=3 all 1: {all(v == 1 for v in brute)}; "
                f"in {elapsed:.0f}s")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def _report(number: int, fn) -> tuple[bool, str]:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    return ok, line


def _make_test(number, fn):
    def test(capsys):
        ok, line = _report(number, fn)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return test


test_criterion_1_covering_half = _make_test(1, criterion_1)
test_criterion_2_full_coalition_is_efficient = _make_test(2, criterion_2)
test_criterion_3_design_matches_closed_form = _make_test(3, criterion_3)
test_criterion_4_curve_shape = _make_test(4, criterion_4)
test_criterion_5_tightness_certificates = _make_test(5, criterion_5)
test_criterion_6_oracle_equivalence = _make_test(6, criterion_6)
test_criterion_7_combinatorial_identities = _make_test(7, criterion_7)
test_criterion_8_identity_welfare = _make_test(8, criterion_8)


if __name__ == "__main__":
    passed = True
    for i, fn in enumerate(CRITERIA, 1):
        ok, line = _report(i, fn)
        passed &= ok
        print(line, flush=True)
    sys.exit(0 if passed else 1)
