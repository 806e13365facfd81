"""Derivations on S(n) and the normalized Milnor-type operator.

The Milnor-type operator St_i is taken to be the derivation with
x_j -> x_j^(q^i).  The generator action is a convention chosen here; the
divisibility probe exists to expose it if it disagrees with the expected
behaviour on Dickson invariants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dickson import dickson_q
from .gf import FieldSpec
from .mpoly import MultiPoly, NotDivisible, VariableCountMismatch, exact_div, frob_power

__all__ = [
    "Derivation",
    "LocalizedElement",
    "apply_derivation",
    "milnor_st",
    "normalized_delta",
    "divisibility_probe",
]


@dataclass(frozen=True)
class Derivation:
    nvars: int
    images: tuple[MultiPoly, ...]

    def __post_init__(self):
        if len(self.images) != self.nvars:
            raise VariableCountMismatch("one image per generator required")
        if any(img.nvars != self.nvars for img in self.images):
            raise VariableCountMismatch("images must live in the same ring")

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return apply_derivation(self, f)


def apply_derivation(d: Derivation, f: MultiPoly) -> MultiPoly:
    """Leibniz extension: d(x^e) = sum_i e_i x^(e - eps_i) d(x_i)."""
    if f.nvars != d.nvars:
        raise VariableCountMismatch(f"{f.nvars} vs {d.nvars} variables")
    F, n = f.field, f.nvars
    partials: list[dict[tuple[int, ...], int]] = [{} for _ in range(n)]
    for exps, c in f.iter_terms():
        for i, e in enumerate(exps):
            if e % F.p == 0:
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1 :]
            coeff = F.mul(c, F.from_int(e))
            slot = partials[i]
            slot[lowered] = F.add(slot.get(lowered, 0), coeff)
    total = MultiPoly.zero(F, n)
    for i, terms in enumerate(partials):
        if terms:
            total = total + MultiPoly.from_codes(F, n, terms) * d.images[i]
    return total


def milnor_st(i: int, n: int, spec: FieldSpec) -> Derivation:
    if i < 0:
        raise ValueError("i must be >= 0")
    xs = MultiPoly.gens(spec, n)
    return Derivation(n, tuple(frob_power(x, i) for x in xs))


@dataclass(frozen=True)
class LocalizedElement:
    """num / Q_{n,0}^k in D_n[Q_{n,0}^-1]; compare with ``equals``."""

    num: MultiPoly
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")

    def equals(self, other: LocalizedElement, q0: MultiPoly) -> bool:
        if self.k >= other.k:
            return self.num == other.num * q0 ** (self.k - other.k)
        return self.num * q0 ** (other.k - self.k) == other.num

    def mul(self, other: LocalizedElement) -> LocalizedElement:
        return LocalizedElement(self.num * other.num, self.k + other.k)

    def add(self, other: LocalizedElement, q0: MultiPoly) -> LocalizedElement:
        k = max(self.k, other.k)
        a = self.num * q0 ** (k - self.k)
        b = other.num * q0 ** (k - other.k)
        return LocalizedElement(a + b, k)


def normalized_delta(i: int, n: int, spec: FieldSpec, e: LocalizedElement) -> LocalizedElement:
    """(-1)^n Q_{n,0}^-1 St_i applied to num / Q_{n,0}^k by the quotient rule.

    k = 0 gives k + 1; otherwise the quotient rule costs one more power and
    the result has k + 2.
    """
    q0 = dickson_q(n, spec).polys[0]
    d = milnor_st(i, n, spec)
    sign = spec.from_int((-1) ** n)
    if e.k == 0:
        return LocalizedElement(d(e.num).scale(spec.element(sign)), 1)
    top = d(e.num) * q0 - (e.num * d(q0)).scale(spec.element(spec.from_int(e.k)))
    return LocalizedElement(top.scale(spec.element(sign)), e.k + 2)


@dataclass(frozen=True)
class ProbeResult:
    divisible: bool
    residue: MultiPoly | None
    annihilated: bool
    iterations: int

    def to_json(self) -> dict:
        return {
            "divisible": self.divisible,
            "residue": None if self.residue is None else str(self.residue),
            "annihilated_after_p": self.annihilated,
            "iterations": self.iterations,
        }


def divisibility_probe(
    i: int, n: int, s: int, spec: FieldSpec, convention: str = "top_one",
    target: MultiPoly | None = None,
) -> ProbeResult:
    """Does Q_{n,0} divide St_i(Q_{n,s}), and does St_i^p kill Q_{n,s}?

    Report-only.  ``target`` replaces Q_{n,s} (used for edge cases).
    """
    if not 0 <= s <= n - 1:
        raise ValueError("need 0 <= s <= n-1")
    D = dickson_q(n, spec, convention)
    g = D.polys[s] if target is None else target
    d = milnor_st(i, n, spec)
    image = d(g)
    residue = None
    try:
        exact_div(image, D.polys[0])
        divisible = True
    except NotDivisible:
        divisible = False
        residue = image
    it = g
    for _ in range(spec.p):
        it = d(it)
    return ProbeResult(divisible, residue, not it, spec.p)
