"""Moore determinants, upper-triangular invariants V_n, Dickson invariants,
and reduction modulo the Frobenius ideal I_m(n) = (x_1^(q^m), ..., x_n^(q^m)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

from .gf import FieldSpec
from .mpoly import MultiPoly, determinant, exact_div, frob_power

__all__ = [
    "TruncationSpec",
    "DicksonSet",
    "Convention",
    "moore_det",
    "moore_L",
    "v_poly",
    "dickson_q",
    "dickson_oracle",
    "truncate",
    "in_ideal",
]

Convention = Literal["top_zero", "top_one"]
CONVENTIONS = ("top_zero", "top_one")


@dataclass(frozen=True)
class TruncationSpec:
    """The triple (n, q, m) fixing I_m(n) and Q_m(n) = S(n)/I_m(n)."""

    n: int
    field: FieldSpec
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def bound(self) -> int:
        """Smallest exponent that lies in the ideal: q^m."""
        return self.field.q**self.m

    @property
    def dim(self) -> int:
        return self.bound**self.n

    def truncate(self, f: MultiPoly) -> MultiPoly:
        return truncate(f, self)

    def mul(self, *factors: MultiPoly) -> MultiPoly:
        """Product in Q_m(n), reducing after every step."""
        out = factors[0].truncate(self.bound)
        for g in factors[1:]:
            out = out.mul_truncated(g, self.bound)
        return out

    def zero(self) -> MultiPoly:
        return MultiPoly.zero(self.field, self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "m": self.m}


def truncate(f: MultiPoly, tspec: TruncationSpec) -> MultiPoly:
    """Normal form modulo I_m(n): the ideal is monomial, so reduction just
    drops every term with an exponent >= q^m."""
    if f.nvars != tspec.n:
        raise ValueError(f"polynomial has {f.nvars} variables, truncation expects {tspec.n}")
    return f.truncate(tspec.bound)


def in_ideal(f: MultiPoly, tspec: TruncationSpec) -> bool:
    return not truncate(f, tspec)


def moore_det(svars: Sequence[MultiPoly]) -> MultiPoly:
    """det of the s x s matrix whose row r is (v_1^(q^r), ..., v_s^(q^r))."""
    rows = [[frob_power(v, r) for v in svars] for r in range(len(svars))]
    return determinant(rows)


@lru_cache(maxsize=None)
def moore_L(s: int, field: FieldSpec, nvars: int | None = None) -> MultiPoly:
    """L_s in the first s variables of S(nvars)."""
    n = s if nvars is None else nvars
    if not 1 <= s <= n:
        raise ValueError("need 1 <= s <= nvars")
    xs = MultiPoly.gens(field, n)
    return moore_det(xs[:s])


@lru_cache(maxsize=None)
def v_poly(n: int, field: FieldSpec, nvars: int | None = None) -> MultiPoly:
    """V_n = prod over lambda in F_q^(n-1) of (x_n + lambda . (x_1..x_{n-1})).

    Built from its q^(n-1) linear factors, never by dividing L_n by L_{n-1}.
    """
    N = n if nvars is None else nvars
    xs = MultiPoly.gens(field, N)
    out = MultiPoly.constant(field, N, 1)
    for lam in itertools.product(range(field.q), repeat=n - 1):
        form = xs[n - 1]
        for c, x in zip(lam, xs):
            if c:
                form = form + x.scale(field.element(c))
        out = out * form
    return out


@dataclass(frozen=True)
class DicksonSet:
    n: int
    field: FieldSpec
    convention: str
    polys: tuple[MultiPoly, ...]

    def __getitem__(self, i: int) -> MultiPoly:
        return self.polys[i]

    def __len__(self) -> int:
        return len(self.polys)

    def embedded(self, nvars: int) -> list[MultiPoly]:
        return [Q.embed(nvars) for Q in self.polys]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.field.q,
            "convention": self.convention,
            "polys": [str(Q) for Q in self.polys],
        }


@lru_cache(maxsize=None)
def dickson_q(n: int, field: FieldSpec, convention: Convention = "top_zero") -> DicksonSet:
    """(Q_{n,0}, ..., Q_{n,n-1}) in S(n) from

        Q_{n,i} = V_n^(q-1) Q_{n-1,i} + Q_{n-1,i-1}^q,   Q_{n,-1} = 0,

    with Q_{n-1,n-1} taken as 0 (top_zero) or 1 (top_one).
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    q = field.q
    if n == 1:
        x1 = MultiPoly.var(field, 1, 1)
        return DicksonSet(1, field, convention, (x1 ** (q - 1),))
    prev = dickson_q(n - 1, field, convention).embedded(n)
    top = MultiPoly.constant(field, n, 1 if convention == "top_one" else 0)
    prev.append(top)
    v = v_poly(n, field) ** (q - 1)
    polys = []
    for i in range(n):
        term = v * prev[i] if prev[i] else prev[i]
        if i >= 1:
            term = term + frob_power(prev[i - 1], 1)
        polys.append(term)
    return DicksonSet(n, field, convention, tuple(polys))


def _x_n_major(exps: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(reversed(exps))


@lru_cache(maxsize=None)
def dickson_oracle(n: int, i: int, field: FieldSpec) -> MultiPoly:
    """Classical Dickson invariant as a quotient of Moore-type minors.

    det[x_j^(q^e)] over row exponents {0..n} minus {i}, divided by L_n, with
    the sign fixed so the term of highest x_n-degree (ties broken by x_{n-1},
    ...) has coefficient +1.
    """
    if not 0 <= i <= n - 1:
        raise ValueError("need 0 <= i <= n-1")
    xs = MultiPoly.gens(field, n)
    rows = [[frob_power(x, e) for x in xs] for e in range(n + 1) if e != i]
    quotient = exact_div(determinant(rows), moore_L(n, field))
    lead_exps, lead_c = max(quotient.iter_terms(), key=lambda ec: _x_n_major(ec[0]))
    if lead_c == field.neg(1) and lead_c != 1:
        quotient = -quotient
    return quotient
