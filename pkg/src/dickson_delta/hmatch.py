"""The exponent-matching predicate and the vanishing of V_4^(q-1) G f L_k.

For f in x1..xk and G in x1..x3 the predicate asks that every pair of
monomials x^alpha of f and x^gamma of G has a coordinate t <= k with
alpha_t + gamma_t >= q^m - 1.  Only exponents are read; coefficients (and
their signs) never matter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .dickson import TruncationSpec, dickson_q, moore_L, v_poly
from .mpoly import MultiPoly, random_poly
from .seeding import derive_rng

__all__ = [
    "MatchVerdict",
    "check_hmatch",
    "verify_vanishing",
    "search_counterexample",
    "default_candidate_G",
    "f_candidates",
    "soundness_sweep",
]


@dataclass(frozen=True)
class MatchVerdict:
    holds: bool
    alpha: tuple[int, ...] | None = None
    gamma: tuple[int, ...] | None = None
    sums: tuple[int, ...] | None = None

    @property
    def violation(self):
        return None if self.holds else (self.alpha, self.gamma)

    def to_json(self) -> dict:
        out: dict = {"holds": self.holds}
        if not self.holds:
            out["violation"] = {"alpha": list(self.alpha), "gamma": list(self.gamma), "sums": list(self.sums)}
        return out


def _restrict(exps: tuple[int, ...], k: int) -> tuple[int, ...]:
    # gamma_4 := 0 when k = 4; coordinates past k are ignored.
    padded = exps + (0,) * max(0, k - len(exps))
    return padded[:k]


def check_hmatch(f: MultiPoly, G: MultiPoly, k: int, tspec: TruncationSpec) -> MatchVerdict:
    """Exhaustive pairwise check; the first violating pair in ascending
    graded-lex order (f's monomials outer) is returned as the witness."""
    if not 1 <= k <= 4:
        raise ValueError("need 1 <= k <= 4")
    if f.support() - set(range(1, k + 1)):
        raise ValueError(f"f must only involve x1..x{k}")
    if G.support() - {1, 2, 3}:
        raise ValueError("G must only involve x1..x3")
    threshold = tspec.bound - 1
    alphas = [_restrict(e, k) for e in f.monomials()]
    gammas = [_restrict(e[:3], k) for e in G.monomials()]
    for a in alphas:
        for g in gammas:
            sums = tuple(x + y for x, y in zip(a, g))
            if all(v < threshold for v in sums):
                return MatchVerdict(False, a, g, sums)
    return MatchVerdict(True)


def verify_vanishing(f: MultiPoly, G: MultiPoly, s: int, tspec: TruncationSpec) -> tuple[bool, MultiPoly]:
    """Whether V_4^(q-1) G f L_{4-s} lies in I_m(4); also the reduced product."""
    if tspec.n != 4:
        raise ValueError("the vanishing statement lives in S(4)")
    if not 0 <= s <= 3:
        raise ValueError("need 0 <= s <= 3")
    F, q = tspec.field, tspec.q
    k = 4 - s
    residue = tspec.mul(
        v_poly(4, F) ** (q - 1), G.embed(4), f.embed(4), moore_L(k, F, 4)
    )
    return not residue, residue


def default_candidate_G(tspec: TruncationSpec, convention: str = "top_zero") -> list[tuple[str, MultiPoly]]:
    """Q_{3,1}, Q_{3,2}, then the unit 1 of D_3.

    Without the unit no witness exists at (q, m, s) = (2, 2, 3): the product
    is linear in f and vanishes for every monomial f when G is Q_{3,1} or Q_{3,2}.
    """
    D = dickson_q(3, tspec.field, convention).embedded(4)
    return [("Q_{3,1}", D[1]), ("Q_{3,2}", D[2]), ("1", MultiPoly.constant(tspec.field, 4, 1))]


def f_candidates(tspec: TruncationSpec, s: int, seed: int = 0) -> Iterator[MultiPoly]:
    """Every polynomial in x1..x_{4-s} with at most two terms and exponents
    below q^m, in graded-lex order; then seeded random ones forever."""
    F = tspec.field
    k = 4 - s
    top = tspec.bound - 1
    monos = sorted(itertools.product(range(top + 1), repeat=k), key=lambda e: (sum(e), e))
    pad = (0,) * (4 - k)
    units = range(1, F.q)
    yield MultiPoly.zero(F, 4)
    for e in monos:
        for c in units:
            yield MultiPoly.from_codes(F, 4, {e + pad: c})
    for e1, e2 in itertools.combinations(monos, 2):
        for c1, c2 in itertools.product(units, units):
            yield MultiPoly.from_codes(F, 4, {e1 + pad: c1, e2 + pad: c2})
    rng = derive_rng(seed, "hmatch-search", F.q, tspec.m, s)
    while True:
        yield random_poly(F, k, top, 2, rng).embed(4)


@dataclass(frozen=True)
class Witness:
    f: MultiPoly
    G: MultiPoly
    G_name: str
    index: int
    residue: MultiPoly

    @property
    def monomial(self) -> tuple[int, ...]:
        return self.residue.monomials()[-1]

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "G": self.G_name,
            "G_poly": str(self.G),
            "candidate_index": self.index,
            "residue_monomial": list(self.monomial),
            "residue_terms": len(self.residue),
        }


def search_counterexample(
    tspec: TruncationSpec,
    s: int,
    candidate_G: Sequence[tuple[str, MultiPoly]] | None = None,
    f_source=None,
    budget: int = 500,
    seed: int = 0,
) -> Witness | None:
    """First (f, G) for which V_4^(q-1) G f L_{4-s} does not vanish in Q_m(4).

    ``budget`` counts f candidates; every G is tried on each.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    Gs = list(candidate_G) if candidate_G is not None else default_candidate_G(tspec)
    source = f_source if f_source is not None else f_candidates(tspec, s, seed)
    for index, f in enumerate(itertools.islice(source, budget)):
        for name, G in Gs:
            ok, residue = verify_vanishing(f, G, s, tspec)
            if not ok:
                return Witness(f, G.embed(4), name, index, residue)
    return None


def soundness_sweep(
    configs: Sequence[TruncationSpec], samples: int, seed: int = 0, max_attempts: int = 100_000
) -> tuple[int, list[tuple[TruncationSpec, int, MultiPoly, MultiPoly]]]:
    """Draw random (f, G, s) until ``samples`` of them satisfy the predicate,
    cycling through ``configs``; return (count, violations of vanishing)."""
    found, violations = 0, []
    attempts = 0
    while found < samples:
        if attempts >= max_attempts:
            raise RuntimeError(f"only {found} matching samples after {attempts} draws")
        T = configs[attempts % len(configs)]
        rng = derive_rng(seed, "soundness", attempts)
        attempts += 1
        s = rng.randint(1, 3)
        k = 4 - s
        top = T.bound - 1
        f = random_poly(T.field, k, top, rng.randint(1, 3), rng).embed(4)
        if rng.random() < 0.5:
            D = dickson_q(3, T.field, "top_zero").embedded(4)
            G = rng.choice(D + [MultiPoly.constant(T.field, 4, 1)])
        else:
            G = random_poly(T.field, 3, top, rng.randint(1, 3), rng).embed(4)
        if not f or not G:
            continue
        if not check_hmatch(f.embed(4), G, k, T).holds:
            continue
        found += 1
        ok, _ = verify_vanishing(f, G, s, T)
        if not ok:
            violations.append((T, s, f, G))
    return found, violations
