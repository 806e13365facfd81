"""Randomized verifiers for the Dickson/delta intertwining identities.

Two modes:

* ``fractional`` divides each determinant by L_s^(q-1) exactly and compares
  the quotients in Q_m(n).  A trial whose delta value is not a polynomial is
  skipped and counted.
* ``numerator`` clears the common denominator and tests whether the
  difference of numerators lies in I_m(n).  It never skips.

Multiplying a numerator by L_s^(q-1) is not injective on Q_m(n), so the two
modes can disagree; the reports make such disagreements visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .delta import delta, delta_iter2_numerator, delta_numerator
from .dickson import TruncationSpec, dickson_q
from .gf import FieldSpec
from .mpoly import MultiPoly, frob_power, random_poly
from .seeding import derive_rng

__all__ = [
    "Failure",
    "VerificationReport",
    "check_rank3",
    "check_rank4_line6",
    "check_rank4_line7",
    "check_annihilators",
    "SUITES",
    "run_suite",
]

MODES = ("fractional", "numerator")


@dataclass(frozen=True)
class Failure:
    f: MultiPoly
    j: int
    residue: MultiPoly
    label: str = ""

    def to_json(self) -> dict:
        return {"f": str(self.f), "j": self.j, "label": self.label, "residue": str(self.residue)}


@dataclass
class VerificationReport:
    suite: str
    field: FieldSpec
    m: int
    mode: str
    trials: int
    seed: int
    convention: str = "top_zero"
    failures: list[Failure] = field(default_factory=list)
    skipped: int = 0
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def failing_inputs(self) -> set[tuple[str, int]]:
        return {(str(fl.f), fl.j) for fl in self.failures}

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "field": self.field.to_json(),
            "m": self.m,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "convention": self.convention,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": [fl.to_json() for fl in self.failures],
        }

    def summary(self) -> str:
        status = "OK" if self.passed else "FAIL"
        return (
            f"{self.suite} {self.mode} q={self.field.q},m={self.m}: {status} "
            f"({self.checked} checked, {self.skipped} skipped, {len(self.failures)} failed)"
        )


def _random_f(F: FieldSpec, m: int, nvars: int, rng, ambient: int) -> MultiPoly:
    # per-variable degree <= min(2, q^m - 1), two terms
    return random_poly(F, nvars, min(2, F.q**m - 1), 2, rng).embed(ambient)


class _Checker:
    """Shared bookkeeping for one suite run."""

    def __init__(self, report: VerificationReport, tspec: TruncationSpec):
        self.report = report
        self.T = tspec

    def record(self, f: MultiPoly, j: int, label: str, diff: MultiPoly | None) -> None:
        if diff is None:
            self.report.skipped += 1
            return
        self.report.checked += 1
        residue = self.T.truncate(diff)
        if residue:
            self.report.failures.append(Failure(f, j, residue, label))

    def intertwine(self, f, j, label, s, lhs_factor, rhs_input) -> None:
        """lhs_factor * delta_s(f) == delta_s(rhs_input); rhs_input None means 0."""
        T, m = self.T, self.T.m
        if self.report.mode == "numerator":
            lhs = T.mul(lhs_factor, delta_numerator(s, m, f))
            rhs = delta_numerator(s, m, rhs_input) if rhs_input is not None else T.zero()
            self.record(f, j, label, lhs - rhs.truncate(T.bound))
            return
        a = delta(s, m, f)
        if not a.exact:
            self.record(f, j, label, None)
            return
        lhs = T.mul(lhs_factor, a.value)
        if rhs_input is None:
            self.record(f, j, label, lhs)
            return
        b = delta(s, m, rhs_input)
        if not b.exact:
            self.record(f, j, label, None)
            return
        self.record(f, j, label, lhs - b.value.truncate(T.bound))


def _fp(g: MultiPoly, k: int = 1) -> MultiPoly:
    return frob_power(g, k)


def check_rank3(
    spec: FieldSpec, m: int, trials: int = 5, seed: int = 0, mode: str = "fractional",
    convention: str = "top_zero",
) -> VerificationReport:
    """Rank-three identities in Q_m(3):

    Q_{s,0} d_s(f) = 0 (s = 1, 2, 3); Q_{2,1} d_2(f) = d_2(Q_{1,0}^q f);
    Q_{3,i} d_3(f) = d_3(Q_{2,i-1}^q f) (i = 1, 2); and, always at numerator
    level, Q_{3,2} d_2^2(f) = d_2^2(Q_{1,0}^(q^2) f) and Q_{3,1} d_2^2(f) = 0.
    Each d_s is fed a random f in x1..xs.
    """
    _validate(m, mode)
    T = TruncationSpec(3, spec, m)
    rep = VerificationReport("rank3", spec, m, mode, trials, seed, convention)
    ck = _Checker(rep, T)
    Q = {s: dickson_q(s, spec, convention).embedded(3) for s in (1, 2, 3)}
    for t in range(trials):
        rng = derive_rng(seed, "rank3", spec.q, m, t)
        fs = {s: _random_f(spec, m, s, rng, 3) for s in (3, 2, 1)}
        for s in (1, 2, 3):
            ck.intertwine(fs[s], s - 1, f"Q_{{{s},0}} d_{s}(f) = 0", s, Q[s][0], None)
        ck.intertwine(
            fs[2], 3, "Q_{2,1} d_2(f) = d_2(Q_{1,0}^q f)", 2, Q[2][1], _fp(Q[1][0]) * fs[2]
        )
        for i in (1, 2):
            ck.intertwine(
                fs[3], 3 + i, f"Q_{{3,{i}}} d_3(f) = d_3(Q_{{2,{i - 1}}}^q f)", 3,
                Q[3][i], _fp(Q[2][i - 1]) * fs[3],
            )
        f2 = fs[2]
        n1, _ = delta_iter2_numerator(2, m, f2)
        n2, _ = delta_iter2_numerator(2, m, _fp(Q[1][0], 2) * f2)
        ck.record(f2, 6, "Q_{3,2} d_2^2(f) = d_2^2(Q_{1,0}^(q^2) f)", T.mul(Q[3][2], n1) - T.truncate(n2))
        ck.record(f2, 7, "Q_{3,1} d_2^2(f) = 0", T.mul(Q[3][1], n1))
    return rep


def check_rank4_line6(
    spec: FieldSpec, m: int, trials: int = 5, seed: int = 0, mode: str = "fractional",
    convention: str = "top_zero",
) -> VerificationReport:
    """Q_{4,j} d_4(f) = d_4(Q_{3,j-1}^q f) in Q_m(4), j = 1, 2, 3, f in x1..x3."""
    _validate(m, mode)
    T = TruncationSpec(4, spec, m)
    rep = VerificationReport("rank4-6", spec, m, mode, trials, seed, convention)
    ck = _Checker(rep, T)
    Q4 = dickson_q(4, spec, convention).polys
    Q3 = dickson_q(3, spec, convention).embedded(4)
    for t in range(trials):
        rng = derive_rng(seed, "rank4-6", spec.q, m, t)
        f = _random_f(spec, m, 3, rng, 4)
        for j in (1, 2, 3):
            ck.intertwine(
                f, j, f"Q_{{4,{j}}} d_4(f) = d_4(Q_{{3,{j - 1}}}^q f)", 4, Q4[j], _fp(Q3[j - 1]) * f
            )
    return rep


def check_rank4_line7(
    spec: FieldSpec, m: int, trials: int = 5, seed: int = 0, mode: str = "fractional",
    convention: str = "top_zero",
) -> VerificationReport:
    """Q_{4,3} d_3^2(f) = d_3^2(Q_{2,1}^(q^2) f)  (j = 3) and
    Q_{4,2} d_3^2(f) = 0  (j = 2) in Q_m(4)."""
    _validate(m, mode)
    T = TruncationSpec(4, spec, m)
    rep = VerificationReport("rank4-7", spec, m, mode, trials, seed, convention)
    ck = _Checker(rep, T)
    Q4 = dickson_q(4, spec, convention).polys
    Q21 = dickson_q(2, spec, convention).embedded(4)[1]
    label_a = "Q_{4,3} d_3^2(f) = d_3^2(Q_{2,1}^(q^2) f)"
    label_b = "Q_{4,2} d_3^2(f) = 0"
    for t in range(trials):
        rng = derive_rng(seed, "rank4-7", spec.q, m, t)
        f = _random_f(spec, m, 3, rng, 4)
        f_star = _fp(Q21, 2) * f
        if mode == "numerator":
            n_f, _ = delta_iter2_numerator(3, m, f)
            n_star, _ = delta_iter2_numerator(3, m, f_star)
            ck.record(f, 3, label_a, T.mul(Q4[3], n_f) - T.truncate(n_star))
            ck.record(f, 2, label_b, T.mul(Q4[2], n_f))
            continue
        dd_f = _iterate_exact(3, m, f)
        if dd_f is None:
            ck.record(f, 3, label_a, None)
            ck.record(f, 2, label_b, None)
            continue
        dd_star = _iterate_exact(3, m, f_star)
        ck.record(f, 3, label_a, None if dd_star is None else T.mul(Q4[3], dd_f) - T.truncate(dd_star))
        ck.record(f, 2, label_b, T.mul(Q4[2], dd_f))
    return rep


def _iterate_exact(s: int, m: int, f: MultiPoly) -> MultiPoly | None:
    """d_s(d_s(f)) with exact division at each step, or None if either step
    leaves the polynomial ring."""
    first = delta(s, m, f)
    if not first.exact:
        return None
    second = delta(s, m, first.value)
    return second.value if second.exact else None


def check_annihilators(
    spec: FieldSpec, m: int, s: int, trials: int = 5, seed: int = 0, mode: str = "numerator",
    convention: str = "top_zero",
) -> VerificationReport:
    """Diagnostic: Q_{4,0} d_{4-s}(f) = 0 and Q_{4,j} d_{4-s}(f) = 0 for
    1 <= j <= 3 - s, with f in x1..x_{4-s}.  Report-only."""
    _validate(m, mode)
    if not 0 <= s <= 3:
        raise ValueError("need 0 <= s <= 3")
    T = TruncationSpec(4, spec, m)
    rep = VerificationReport(f"annihilators-s{s}", spec, m, mode, trials, seed, convention)
    ck = _Checker(rep, T)
    Q4 = dickson_q(4, spec, convention).polys
    k = 4 - s
    for t in range(trials):
        rng = derive_rng(seed, "annihilators", s, spec.q, m, t)
        f = _random_f(spec, m, k, rng, 4)
        for j in [0] + list(range(1, 4 - s)):
            ck.intertwine(f, j, f"Q_{{4,{j}}} d_{k}(f) = 0", k, Q4[j], None)
    return rep


def _validate(m: int, mode: str) -> None:
    if m < 1:
        raise ValueError("m must be >= 1")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "rank3": check_rank3,
    "rank4-6": check_rank4_line6,
    "rank4-7": check_rank4_line7,
}


def run_suite(name: str, spec: FieldSpec, m: int, trials: int, seed: int, mode: str,
              convention: str = "top_zero", s: int = 0) -> VerificationReport:
    if name == "annihilators":
        return check_annihilators(spec, m, s, trials, seed, mode, convention)
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    return fn(spec, m, trials, seed, mode, convention)
