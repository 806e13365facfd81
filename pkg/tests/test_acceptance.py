"""Acceptance criteria 1-10.

Each criterion is a function returning (passed, detail).  Under pytest every
criterion prints one PASS/FAIL line and then asserts; run the file directly
to get only the ten lines.
"""

import random
import sys
import time

import pytest

from dickson_delta.cli import reproduce_appendix
from dickson_delta.dickson import TruncationSpec, dickson_oracle, dickson_q, moore_L, truncate, v_poly
from dickson_delta.delta import edge_expansion
from dickson_delta.gf import field_new
from dickson_delta.hmatch import check_hmatch, search_counterexample, soundness_sweep, verify_vanishing
from dickson_delta.identities import check_rank3, check_rank4_line6, check_rank4_line7
from dickson_delta.invariants import fixed_space_dim, gl_generators, lrs_series
from dickson_delta.mpoly import (
    MultiPoly,
    determinant,
    determinant_leibniz,
    exact_div,
    frob_power,
    parse_poly,
    random_poly,
    substitute,
)
from dickson_delta.seeding import derive_rng
from dickson_delta.steenrod import Derivation

EXPECTED_SUMMARY = [
    "(6) fractional q=2,m=1: OK",
    "(6) fractional q=2,m=2: OK",
    "(7) fractional q=2,m=1: OK",
    "(7) fractional q=2,m=2: OK",
    "(7) numerator (theoretical) q=2,m=1: OK",
    "(7) numerator (theoretical) q=2,m=2: OK",
]


def _timed(limit):
    def wrap(fn):
        def inner():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if dt > limit:
                ok, detail = False, f"{detail}; took {dt:.1f}s > {limit}s"
            return ok, f"{detail} [{dt:.2f}s]"

        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner

    return wrap


@_timed(120)
def criterion_1():
    """Six-line rank-four summary at q = 2 reads OK throughout."""
    ok, lines, _ = reproduce_appendix(seed=0)
    got = [ln.strip() for ln in lines[1:]]
    return ok and got == EXPECTED_SUMMARY, "; ".join(got)


@_timed(120)
def criterion_2():
    """Rank-three suite at (2,1), (2,2), (3,1), both modes, 5 trials."""
    bad = []
    for q, m in [(2, 1), (2, 2), (3, 1)]:
        for mode in ("fractional", "numerator"):
            rep = check_rank3(field_new(q), m, 5, 0, mode)
            if not rep.passed:
                js = sorted({fl.j for fl in rep.failures})
                bad.append(f"q={q},m={m},{mode}: j={js}")
    return not bad, "all passed" if not bad else "failing " + " | ".join(bad)


@_timed(300)
def criterion_3():
    """Rank-four lines at (3,1), 3 trials, numerator mode."""
    F = field_new(3)
    a = check_rank4_line6(F, 1, 3, 0, "numerator")
    b = check_rank4_line7(F, 1, 3, 0, "numerator")
    return a.passed and b.passed, f"{a.summary()}; {b.summary()}"


def criterion_4():
    """Matching predicate on three fixed (f, G) pairs."""
    T1 = TruncationSpec(4, field_new(2), 1)
    G1 = parse_poly("x1^2*x2^2 + x2^2*x3^2 + x1 + x2 + x3", T1.field, 4)
    T2 = TruncationSpec(4, field_new(3), 2)
    G2 = parse_poly("x1^9*x2^9 + x1^8 + x2^8", T2.field, 4)
    ok1 = ok2 = True
    for i in range(20):
        f1 = random_poly(T1.field, 3, 1, 3, derive_rng(0, "hm-g1", i)).embed(4)
        f2 = random_poly(T2.field, 2, 8, 3, derive_rng(0, "hm-g2", i)).embed(4)
        ok1 &= check_hmatch(f1, G1, 3, T1).holds
        ok2 &= check_hmatch(f2, G2, 2, T2).holds
    v = check_hmatch(parse_poly("x1^2 + x2", T2.field, 4), parse_poly("-x1*x2^3", T2.field, 4), 2, T2)
    ok3 = (not v.holds) and v.alpha == (0, 1) and v.gamma == (1, 3) and max(v.sums) < 8 and set(v.sums) == {1, 4}
    return ok1 and ok2 and ok3, f"G1 holds={ok1}, G2 holds={ok2}, short pair witness={v.alpha},{v.gamma} sums={v.sums}"


@_timed(300)
def criterion_5():
    """Soundness sweep: 200 matching samples, zero violations."""
    F2, F3 = field_new(2), field_new(3)
    configs = [TruncationSpec(4, F2, 1), TruncationSpec(4, F2, 2), TruncationSpec(4, F3, 1)]
    found, violations = soundness_sweep(configs, 200, seed=0)
    return found >= 200 and not violations, f"{found} samples, {len(violations)} violations"


@_timed(120)
def criterion_6():
    """Counterexample search at (q, m, s) = (2, 2, 3), budget 500."""
    T = TruncationSpec(4, field_new(2), 2)
    w = search_counterexample(T, 3, budget=500, seed=0)
    if w is None:
        return False, "no witness within budget"
    ok, _ = verify_vanishing(w.f, w.G, 3, T)
    return not ok, f"f = {w.f}, G = {w.G_name}, index {w.index}, residue monomial {w.monomial}"


@_timed(60)
def criterion_7():
    """Edge expansion: H_0(h) = h in Q_m(3) for 20 seeded h."""
    F = field_new(2)
    bad = 0
    for m in (1, 2):
        T4, T3 = TruncationSpec(4, F, m), TruncationSpec(3, F, m)
        for i in range(20):
            h3 = random_poly(F, 3, F.q**m - 1, 3, derive_rng(0, "edge", m, i))
            H, _ = edge_expansion(m, h3.embed(4), T4)
            h0 = MultiPoly.from_codes(F, 3, {e[:3]: c for e, c in H[0].iter_terms()})
            bad += truncate(h0, T3) != truncate(h3, T3)
    return bad == 0, f"{40 - bad}/40 agree"


def criterion_8():
    """Dickson cross-validation."""
    ok_oracle = all(
        dickson_q(n, field_new(q), "top_one").polys[i] == dickson_oracle(n, i, field_new(q))
        for n in (1, 2, 3)
        for q in (2, 3)
        for i in range(n)
    )
    ok_v = True
    for q in (2, 3):
        F = field_new(q)
        for n in range(1, 5):
            prev = MultiPoly.constant(F, n, 1) if n == 1 else moore_L(n - 1, F, n)
            ok_v &= v_poly(n, F) * prev == moore_L(n, F)
    ok_top = all(
        dickson_q(4, field_new(q)).polys[3] == frob_power(dickson_q(3, field_new(q)).embedded(4)[2], 1)
        for q in (2, 3)
    )
    return ok_oracle and ok_v and ok_top, f"oracle={ok_oracle}, V*L={ok_v}, top_zero Q43=Q32^q {ok_top}"


@_timed(180)
def criterion_9():
    """Fixed-space dimension equals C_{n,m}(1)."""
    rows = []
    ok = True
    for n, q, m in [(1, 2, 1), (1, 2, 2), (2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1), (4, 2, 1)]:
        F = field_new(q)
        d = fixed_space_dim(gl_generators(n, F), TruncationSpec(n, F, m))
        c = lrs_series(n, m, F).at_one()
        ok &= d == c
        rows.append(f"({n},{q},{m}):{d}/{c}")
    return ok, " ".join(rows)


@_timed(120)
def criterion_10():
    """Kernel properties, 200+ seeded cases each."""
    rng = random.Random(0)
    fails = {}
    fields = [field_new(2), field_new(3), field_new(2, 2)]

    n = 0
    for _ in range(300):
        F = rng.choice(fields)
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        good = (
            F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            and F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
            and F.add(a, F.neg(a)) == 0
            and (a == 0 or F.mul(a, F.inv(a)) == 1)
        )
        n += not good
    fails["field axioms"] = n

    n = 0
    for _ in range(200):
        F = rng.choice(fields)
        f = random_poly(F, 3, 3, 4, rng)
        g = random_poly(F, 3, 2, 3, rng)
        if not g:
            g = MultiPoly.constant(F, 3, 1)
        n += exact_div(f * g, g) != f
    fails["exact_div"] = n

    n = 0
    for _ in range(200):
        F = rng.choice(fields)
        M = [[random_poly(F, 2, 2, 2, rng) for _ in range(3)] for _ in range(3)]
        n += determinant(M) != determinant_leibniz(M)
    fails["determinant"] = n

    n = 0
    for _ in range(200):
        F = rng.choice(fields)
        f, g = random_poly(F, 3, 2, 3, rng), random_poly(F, 3, 2, 3, rng)
        imgs = [random_poly(F, 3, 1, 2, rng) for _ in range(3)]
        n += substitute(f * g, imgs) != substitute(f, imgs) * substitute(g, imgs)
        n += substitute(f + g, imgs) != substitute(f, imgs) + substitute(g, imgs)
    fails["substitution"] = n

    n = 0
    for _ in range(200):
        F = rng.choice(fields)
        d = Derivation(3, tuple(random_poly(F, 3, 2, 2, rng) for _ in range(3)))
        f, g = random_poly(F, 3, 3, 3, rng), random_poly(F, 3, 3, 3, rng)
        n += d(f * g) != d(f) * g + f * d(g)
    fails["Leibniz"] = n

    return not any(fails.values()), ", ".join(f"{k}: {v} failures" for k, v in fails.items())


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
]


def _line(i, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {i}: {CRITERIA[i - 1].__doc__.strip()} -- {detail}"


@pytest.mark.parametrize("index", range(1, 11), ids=lambda i: f"criterion_{i}")
def test_criterion(index, capsys):
    ok, detail = CRITERIA[index - 1]()
    with capsys.disabled():
        print("\n" + _line(index, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(i, *fn()) for i, fn in enumerate(CRITERIA, 1)]
    for i, ok, detail in results:
        print(_line(i, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
