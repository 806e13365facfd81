"""Arithmetic in small finite fields F_q, q = p^r.

Elements are stored as integer codes: the base-p digits of the code are the
coefficients of the element as a polynomial in the generator ``a``, leading
coefficient first.  All arithmetic goes through lookup tables, which is fine
for the q <= 16 this package supports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

__all__ = [
    "FieldSpec",
    "FieldElement",
    "NotPrime",
    "ReducibleModulus",
    "FieldDivisionByZero",
    "field_new",
    "enumerate_field",
    "frobenius",
    "MAX_Q",
]

MAX_Q = 16

# Monic moduli, leading coefficient first (a^2 + a + 1 -> (1, 1, 1)).
_MODULUS_TABLE = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (3, 2): (1, 0, 1),
}


class NotPrime(ValueError):
    pass


class ReducibleModulus(ValueError):
    pass


class FieldDivisionByZero(ZeroDivisionError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _polymod(num: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` by monic ``mod`` over F_p (lists leading-first)."""
    num = [c % p for c in num]
    dm = len(mod) - 1
    while len(num) - 1 >= dm and num:
        lead = num[0]
        if lead:
            for i, c in enumerate(mod):
                num[i] = (num[i] - lead * c) % p
        num.pop(0)
    return num


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    r = len(mod) - 1
    for d in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            rem = _polymod(list(mod), (1, *tail), p)
            if not any(rem):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q with q = p^r, given by a monic irreducible modulus."""

    p: int
    r: int = 1
    modulus: tuple[int, ...] = (1, 0)
    _add: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _mul: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _neg: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _inv: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("extension degree must be >= 1")
        mod = tuple(c % self.p for c in self.modulus)
        if len(mod) != self.r + 1 or mod[0] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {self.r}")
        if self.r > 1 and not _is_irreducible(mod, self.p):
            raise ReducibleModulus(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)
        q = self.q
        if q > MAX_Q:
            raise ValueError(f"q = {q} exceeds the supported maximum {MAX_Q}")
        digits = [self._digits(c) for c in range(q)]
        add = [0] * (q * q)
        mul = [0] * (q * q)
        for a in range(q):
            for b in range(q):
                s = [(x + y) % self.p for x, y in zip(digits[a], digits[b])]
                add[a * q + b] = self._code(s)
                mul[a * q + b] = self._code(self._mul_digits(digits[a], digits[b]))
        neg = [self._code([(-x) % self.p for x in digits[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        object.__setattr__(self, "_add", tuple(add))
        object.__setattr__(self, "_mul", tuple(mul))
        object.__setattr__(self, "_neg", tuple(neg))
        object.__setattr__(self, "_inv", tuple(inv))

    @property
    def q(self) -> int:
        return self.p**self.r

    @property
    def is_prime_field(self) -> bool:
        return self.r == 1

    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.r):
            out.append(code % self.p)
            code //= self.p
        return out[::-1]

    def _code(self, digits: Sequence[int]) -> int:
        c = 0
        for d in digits:
            c = c * self.p + d
        return c

    def _mul_digits(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        prod = [0] * (2 * self.r - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        rem = _polymod(prod, self.modulus, self.p)
        rem = [0] * (self.r - len(rem)) + rem
        return rem[-self.r :]

    # Code-level arithmetic; these are the hot-path entry points for mpoly.
    def add(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a * self.q + self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionByZero("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return self._code([0] * (self.r - 1) + [n % self.p])

    def primitive_element(self) -> int:
        for a in range(1, self.q):
            if all(self.pow(a, (self.q - 1) // d) != 1 for d in _prime_factors(self.q - 1)):
                return a
        raise AssertionError("no primitive element")

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for q = {self.q}")
        return FieldElement(self, code)

    def format(self, code: int) -> str:
        if self.r == 1:
            return str(code)
        digits = self._digits(code)
        parts = []
        for i, c in enumerate(digits):
            deg = self.r - 1 - i
            if c == 0:
                continue
            if deg == 0:
                parts.append(str(c))
                continue
            mono = "a" if deg == 1 else f"a^{deg}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def parse(self, text: str) -> int:
        """Parse a field-element string: an integer, or a polynomial in ``a``."""
        text = text.replace(" ", "")
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        if not text:
            raise ValueError("empty field element")
        digits = [0] * self.r
        sign_terms = text.replace("-", "+-").split("+")
        for tok in sign_terms:
            if not tok:
                continue
            neg = tok.startswith("-")
            tok = tok.lstrip("-")
            if "a" in tok:
                if self.r == 1:
                    raise ValueError(f"generator 'a' not available in F_{self.p}")
                coeff, _, mono = tok.rpartition("*") if "*" in tok else ("1", "", tok)
                deg = int(mono.split("^")[1]) if "^" in mono else 1
                if deg >= self.r:
                    raise ValueError(f"power a^{deg} not reduced")
                c = int(coeff)
            else:
                deg, c = 0, int(tok)
            digits[self.r - 1 - deg] += -c if neg else c
        return self._code([d % self.p for d in digits])

    def __str__(self) -> str:
        if self.r == 1:
            return f"GF({self.p})"
        mod = "".join(str(c) for c in self.modulus)
        return f"GF({self.q}; modulus {mod})"

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "q": self.q, "modulus": list(self.modulus)}


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def field_new(p: int, r: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """Build and validate F_{p^r}.

    For r > 1 the modulus defaults to the built-in table (q = 4, 8, 9, 16);
    a user-supplied modulus is checked for irreducibility.
    """
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if modulus is None:
        if r == 1:
            modulus = (1, 0)
        elif (p, r) in _MODULUS_TABLE:
            modulus = _MODULUS_TABLE[(p, r)]
        else:
            raise ValueError(f"no built-in modulus for q = {p}^{r}; supply one")
    return FieldSpec(p, r, tuple(modulus))


@dataclass(frozen=True)
class FieldElement:
    """A single element of F_q with operator overloading.

    Polynomials store raw codes; this wrapper exists for user-facing code.
    """

    spec: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.spec._digits(self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.spec, self.spec.div(self.code, b))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __str__(self) -> str:
        return self.spec.format(self.code)

    def __repr__(self) -> str:
        return f"FieldElement({self}, q={self.spec.q})"


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, ordered lexicographically on the coefficient vector."""
    return [FieldElement(spec, c) for c in range(spec.q)]


def frobenius(a: FieldElement, k: int = 1, base: str = "q") -> FieldElement:
    """Apply c -> c^(q^k) (the identity on F_q), or c -> c^(p^k) when ``base='p'``.

    The p-power map is the nontrivial automorphism used for diagnostics on
    extension fields.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    step = a.spec.q if base == "q" else a.spec.p
    return a ** (step**k)
