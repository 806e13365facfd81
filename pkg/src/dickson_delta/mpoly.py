"""Sparse multivariate polynomials over F_q.

A monomial x1^e1 ... xn^en is packed into one Python int, with x1 in the
most significant slot.  Each slot is ``SLOT_BITS`` wide; stored exponents
never exceed ``MAX_EXPONENT`` so that the sum of two exponents still fits in
its slot.  This makes monomial multiplication an integer addition, lexicographic
comparison an integer comparison, and "some exponent >= B" a single
add-and-mask test.
"""

from __future__ import annotations

import heapq
import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .gf import FieldElement, FieldSpec

__all__ = [
    "MultiPoly",
    "PolyMatrix",
    "PolyFraction",
    "VariableCountMismatch",
    "NotDivisible",
    "NotSquare",
    "ExponentOverflow",
    "exact_div",
    "determinant",
    "determinant_leibniz",
    "frob_power",
    "substitute",
    "coefficient_in_var",
    "random_poly",
    "parse_poly",
    "MAX_EXPONENT",
]

SLOT_BITS = 22
_SLOT_MASK = (1 << SLOT_BITS) - 1
_HIGH = 1 << (SLOT_BITS - 1)
MAX_EXPONENT = 1 << 20


class VariableCountMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class NotSquare(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in exps:
        if e < 0 or e > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} outside [0, {MAX_EXPONENT}]")
        key = (key << SLOT_BITS) | e
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & _SLOT_MASK
        key >>= SLOT_BITS
    return tuple(out)


def _spread(value: int, nvars: int) -> int:
    """The packed monomial with ``value`` in every slot."""
    key = 0
    for _ in range(nvars):
        key = (key << SLOT_BITS) | value
    return key


def bound_masks(nvars: int, bound: int) -> tuple[int, int]:
    """(offset, mask) such that ``(k + offset) & mask`` is nonzero iff some
    exponent of k is >= bound."""
    if not 1 <= bound <= MAX_EXPONENT + 1:
        raise ValueError("bound out of range")
    return _spread(_HIGH - bound, nvars), _spread(_HIGH, nvars)


def _check_overflow(keys: Iterable[int], nvars: int) -> None:
    off, mask = bound_masks(nvars, MAX_EXPONENT + 1)
    for k in keys:
        if (k + off) & mask:
            raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")


class MultiPoly:
    """An element of F_q[x1, ..., xn].

    Treated as immutable: no method mutates ``_t`` after construction.
    ``_t`` maps packed monomials to nonzero coefficient codes.
    """

    __slots__ = ("field", "nvars", "_t", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, packed: Mapping[int, int] | None = None):
        self.field = field
        self.nvars = nvars
        self._t: dict[int, int] = {k: c for k, c in (packed or {}).items() if c}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def _raw(cls, field: FieldSpec, nvars: int, packed: dict[int, int]) -> MultiPoly:
        # Caller guarantees no zero coefficients.
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj._t, obj._hash = field, nvars, packed, None
        return obj

    @classmethod
    def from_terms(cls, field: FieldSpec, nvars: int, terms: Mapping[Sequence[int], object]) -> MultiPoly:
        out: dict[int, int] = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise VariableCountMismatch(f"monomial {tuple(exps)} has length != {nvars}")
            code = _coerce_coeff(field, c)
            k = pack(exps)
            out[k] = field.add(out.get(k, 0), code)
        return cls(field, nvars, out)

    @classmethod
    def from_codes(cls, field: FieldSpec, nvars: int, terms: Mapping[Sequence[int], int]) -> MultiPoly:
        """Like ``from_terms`` but the values are field codes, not integers.

        The two differ only over extension fields, where the integer 2 means
        1 + 1 = 0 while the code 2 is the generator a.
        """
        out: dict[int, int] = {}
        for exps, code in terms.items():
            if len(exps) != nvars:
                raise VariableCountMismatch(f"monomial {tuple(exps)} has length != {nvars}")
            if not 0 <= code < field.q:
                raise ValueError(f"code {code} out of range for F_{field.q}")
            k = pack(exps)
            out[k] = field.add(out.get(k, 0), code)
        return cls(field, nvars, out)

    @classmethod
    def zero(cls, field: FieldSpec, nvars: int) -> MultiPoly:
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, c=1) -> MultiPoly:
        code = _coerce_coeff(field, c)
        return cls._raw(field, nvars, {0: code} if code else {})

    @classmethod
    def var(cls, field: FieldSpec, nvars: int, i: int, power: int = 1) -> MultiPoly:
        """The monomial x_i^power, with 1-based index i."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} out of range 1..{nvars}")
        exps = [0] * nvars
        exps[i - 1] = power
        return cls._raw(field, nvars, {pack(exps): 1})

    @classmethod
    def gens(cls, field: FieldSpec, nvars: int) -> list[MultiPoly]:
        return [cls.var(field, nvars, i) for i in range(1, nvars + 1)]

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.field == other.field and self._t == other._t
        if isinstance(other, (int, FieldElement)):
            return self == MultiPoly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, frozenset(self._t.items())))
        return self._hash

    @property
    def terms(self) -> dict[tuple[int, ...], FieldElement]:
        """Exponent tuple -> coefficient, in descending graded-lex order."""
        return {e: FieldElement(self.field, c) for e, c in self.iter_terms()}

    def iter_terms(self, descending: bool = True) -> Iterator[tuple[tuple[int, ...], int]]:
        """(exponent tuple, coefficient code) pairs in graded-lex order."""
        items = [(unpack(k, self.nvars), c) for k, c in self._t.items()]
        items.sort(key=lambda ec: (sum(ec[0]), ec[0]), reverse=descending)
        return iter(items)

    def monomials(self) -> list[tuple[int, ...]]:
        return [e for e, _ in self.iter_terms(descending=False)]

    def coefficient(self, exps: Sequence[int]) -> FieldElement:
        return FieldElement(self.field, self._t.get(pack(exps), 0))

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(unpack(k, self.nvars)) for k in self._t), default=-1)

    def degree_in(self, i: int) -> int:
        shift = SLOT_BITS * (self.nvars - i)
        return max(((k >> shift) & _SLOT_MASK for k in self._t), default=-1)

    def support(self) -> set[int]:
        """1-based indices of variables that occur."""
        used = set()
        for i in range(1, self.nvars + 1):
            shift = SLOT_BITS * (self.nvars - i)
            if any((k >> shift) & _SLOT_MASK for k in self._t):
                used.add(i)
        return used

    def is_homogeneous(self) -> bool:
        return len({sum(unpack(k, self.nvars)) for k in self._t}) <= 1

    def homogeneous_components(self) -> dict[int, MultiPoly]:
        parts: dict[int, dict[int, int]] = {}
        for k, c in self._t.items():
            parts.setdefault(sum(unpack(k, self.nvars)), {})[k] = c
        return {d: MultiPoly._raw(self.field, self.nvars, t) for d, t in sorted(parts.items())}

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        """Leading (exponents, coefficient code) under graded lex."""
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return next(self.iter_terms())

    # arithmetic -------------------------------------------------------------
    def _check(self, other: MultiPoly) -> None:
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def _lift(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.field, self.nvars, other)

    def __add__(self, other) -> MultiPoly:
        other = self._lift(other)
        F = self.field
        out = dict(self._t)
        for k, c in other._t.items():
            s = F.add(out.get(k, 0), c)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly._raw(F, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        F = self.field
        return MultiPoly._raw(F, self.nvars, {k: F.neg(c) for k, c in self._t.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._lift(other) - self

    def scale(self, c) -> MultiPoly:
        F = self.field
        code = _coerce_coeff(F, c)
        if code == 0:
            return MultiPoly.zero(F, self.nvars)
        return MultiPoly._raw(F, self.nvars, {k: F.mul(v, code) for k, v in self._t.items()})

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out = _mul_terms(self.field, self._t, other._t)
        _check_overflow(out, self.nvars)
        return MultiPoly._raw(self.field, self.nvars, out)

    def __rmul__(self, other) -> MultiPoly:
        return self.scale(other)

    def mul_truncated(self, other: MultiPoly, bound: int) -> MultiPoly:
        """Product with every monomial having an exponent >= bound dropped."""
        self._check(other)
        off, mask = bound_masks(self.nvars, bound)
        a = {k: c for k, c in self._t.items() if not (k + off) & mask}
        b = {k: c for k, c in other._t.items() if not (k + off) & mask}
        out = _mul_terms(self.field, a, b, off, mask)
        return MultiPoly._raw(self.field, self.nvars, out)

    def __pow__(self, e: int) -> MultiPoly:
        if e < 0:
            raise ValueError("negative power")
        F = self.field
        result = MultiPoly.constant(F, self.nvars, 1)
        # f^(d p^j) = (f^(p^j))^d and f^(p^j) is a coefficient/exponent map.
        j = 0
        while e:
            d = e % F.p
            if d:
                base = _frob_p(self, j) if j else self
                for _ in range(d):
                    result = result * base
            e //= F.p
            j += 1
        return result

    def truncate(self, bound: int) -> MultiPoly:
        """Delete monomials with some exponent >= bound."""
        off, mask = bound_masks(self.nvars, bound)
        return MultiPoly._raw(
            self.field, self.nvars, {k: c for k, c in self._t.items() if not (k + off) & mask}
        )

    def embed(self, nvars: int) -> MultiPoly:
        """View as a polynomial in more variables (x_i -> x_i)."""
        if nvars < self.nvars:
            if self.support() - set(range(1, nvars + 1)):
                raise VariableCountMismatch("cannot drop variables that occur")
            shift = SLOT_BITS * (self.nvars - nvars)
            return MultiPoly._raw(self.field, nvars, {k >> shift: c for k, c in self._t.items()})
        shift = SLOT_BITS * (nvars - self.nvars)
        return MultiPoly._raw(self.field, nvars, {k << shift: c for k, c in self._t.items()})

    def map_coefficients(self, fn) -> MultiPoly:
        F = self.field
        return MultiPoly(F, self.nvars, {k: fn(c) for k, c in self._t.items()})

    # rendering --------------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r}, nvars={self.nvars}, q={self.field.q})"

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [{"e": list(e), "c": self.field.format(c)} for e, c in self.iter_terms()],
        }

    @classmethod
    def from_json(cls, field: FieldSpec, data: Mapping) -> MultiPoly:
        n = int(data["nvars"])
        terms: dict[tuple[int, ...], int] = {}
        for t in data["terms"]:
            e = tuple(int(x) for x in t["e"])
            code = field.parse(str(t["c"]))
            terms[e] = field.add(terms.get(e, 0), code)
        return cls.from_codes(field, n, terms)


def _coerce_coeff(field: FieldSpec, c) -> int:
    if isinstance(c, FieldElement):
        if c.spec != field:
            raise ValueError("coefficient from a different field")
        return c.code
    if isinstance(c, int):
        return field.from_int(c)
    if isinstance(c, str):
        return field.parse(c)
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


def _mul_terms(F: FieldSpec, a: dict, b: dict, off: int = 0, mask: int = 0) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return {}
    if F.q == 2:
        acc: set[int] = set()
        if mask:
            for ka in a:
                acc ^= {k for kb in b if not ((k := ka + kb) + off) & mask}
        else:
            for ka in a:
                acc ^= {ka + kb for kb in b}
        return dict.fromkeys(acc, 1)
    out: dict[int, int] = {}
    get = out.get
    if F.r == 1:
        p = F.p
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                if mask and (k + off) & mask:
                    continue
                out[k] = get(k, 0) + ca * cb
        return {k: v % p for k, v in out.items() if v % p}
    q, add, mul = F.q, F._add, F._mul
    for ka, ca in a.items():
        row = ca * q
        for kb, cb in b.items():
            k = ka + kb
            if mask and (k + off) & mask:
                continue
            out[k] = add[get(k, 0) * q + mul[row + cb]]
    return {k: v for k, v in out.items() if v}


def _frob_p(f: MultiPoly, j: int) -> MultiPoly:
    """f^(p^j): coefficients c -> c^(p^j), exponents multiplied by p^j."""
    F = f.field
    e = F.p**j
    out = {k * e: F.pow(c, e) for k, c in f._t.items()}
    _check_overflow(out, f.nvars)
    return MultiPoly._raw(F, f.nvars, out)


def frob_power(f: MultiPoly, k: int) -> MultiPoly:
    """Map coefficients by c -> c^(q^k) and each x_i by x_i^(q^k).

    For coefficients in F_q this equals f^(q^k).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return f
    return _frob_p(f, f.field.r * k)


def substitute(f: MultiPoly, images: Sequence[MultiPoly], bound: int | None = None) -> MultiPoly:
    """Ring homomorphism x_i -> images[i-1].

    With ``bound`` set, all intermediate products are truncated at that
    per-variable exponent bound (valid for monomial ideals of that shape).
    """
    if len(images) != f.nvars:
        raise VariableCountMismatch(f"need {f.nvars} images, got {len(images)}")
    if not images:
        return f
    tgt = images[0].nvars
    F = f.field
    for img in images:
        if img.nvars != tgt:
            raise VariableCountMismatch("images must share a variable count")
        if img.field != F:
            raise ValueError("images over a different field")

    def mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return a.mul_truncated(b, bound) if bound else a * b

    one = MultiPoly.constant(F, tgt, 1)
    powers: list[dict[int, MultiPoly]] = [{0: one, 1: img} for img in images]

    def power(i: int, e: int) -> MultiPoly:
        cache = powers[i]
        if e not in cache:
            half = power(i, e // 2)
            sq = mul(half, half)
            cache[e] = mul(sq, images[i]) if e % 2 else sq
        return cache[e]

    acc: dict[int, int] = {}
    for exps, c in f.iter_terms():
        term = one
        for i, e in enumerate(exps):
            if e:
                term = mul(term, power(i, e))
                if not term:
                    break
        for k, v in term._t.items():
            s = F.add(acc.get(k, 0), F.mul(v, c))
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    return MultiPoly._raw(F, tgt, acc)


def coefficient_in_var(f: MultiPoly, i: int, e: int) -> MultiPoly:
    """The polynomial c with x_i-exponent 0 such that f = sum_e x_i^e c_e."""
    if not 1 <= i <= f.nvars:
        raise IndexError(f"variable index {i} out of range 1..{f.nvars}")
    shift = SLOT_BITS * (f.nvars - i)
    sel = _SLOT_MASK << shift
    want = e << shift
    return MultiPoly._raw(
        f.field, f.nvars, {k - want: c for k, c in f._t.items() if k & sel == want}
    )


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Return h with h * g == f, or raise NotDivisible.

    Long division by leading terms under graded lex.  If the leading term of
    the running remainder is not divisible by LT(g), g cannot divide f.
    """
    f._check(g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    F, n = f.field, f.nvars
    glead_e, glead_c = g.leading_term()
    glead = pack(glead_e)
    ginv = F.inv(glead_c)
    gterms = list(g._t.items())
    rem = dict(f._t)
    heap = [(-sum(unpack(k, n)), -k) for k in rem]
    heapq.heapify(heap)
    quot: dict[int, int] = {}
    hi = _spread(_HIGH, n)
    while rem:
        while True:
            k = -heap[0][1]
            if k in rem:
                break
            heapq.heappop(heap)
        c = rem[k]
        diff = k - glead
        # A cleared guard bit means that slot of k was smaller than LT(g)'s.
        if ((k | hi) - glead) & hi != hi:
            raise NotDivisible("leading term not divisible")
        qc = F.mul(c, ginv)
        quot[diff] = qc
        for kg, cg in gterms:
            kk = diff + kg
            s = F.sub(rem.get(kk, 0), F.mul(qc, cg))
            if s:
                if kk not in rem:
                    heapq.heappush(heap, (-sum(unpack(kk, n)), -kk))
                rem[kk] = s
            else:
                rem.pop(kk, None)
    return MultiPoly._raw(F, n, quot)


class PolyMatrix:
    """A rectangular grid of polynomials sharing one ring."""

    def __init__(self, rows: Sequence[Sequence[MultiPoly]]):
        self.rows = [list(r) for r in rows]
        if not self.rows or any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("matrix must be rectangular and nonempty")
        first = self.rows[0][0]
        for r in self.rows:
            for e in r:
                first._check(e)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.rows[i][j]

    def det(self) -> MultiPoly:
        return determinant(self)


def determinant(M: PolyMatrix | Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Laplace expansion along the row or column with the most zero entries."""
    rows = M.rows if isinstance(M, PolyMatrix) else [list(r) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare(f"matrix is {n}x{len(rows[0]) if rows else 0}")
    if n > 6:
        raise ValueError("determinant supports at most 6x6")
    return _det(rows)


def _det(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    zero = rows[0][0] * 0
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    best_row = max(range(n), key=lambda i: sum(1 for e in rows[i] if not e))
    best_col = max(range(n), key=lambda j: sum(1 for r in rows if not r[j]))
    zr = sum(1 for e in rows[best_row] if not e)
    zc = sum(1 for r in rows if not r[best_col])
    total = zero
    if zr >= zc:
        i = best_row
        for j in range(n):
            if not rows[i][j]:
                continue
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
            term = rows[i][j] * _det(minor)
            total = total + term if (i + j) % 2 == 0 else total - term
    else:
        j = best_col
        for i in range(n):
            if not rows[i][j]:
                continue
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
            term = rows[i][j] * _det(minor)
            total = total + term if (i + j) % 2 == 0 else total - term
    return total


def determinant_leibniz(rows: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Permutation-sum determinant; slow, used as an independent check."""
    from itertools import permutations

    n = len(rows)
    total = rows[0][0] * 0
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        total = total - term if inversions % 2 else total + term
    return total


@dataclass(frozen=True)
class PolyFraction:
    """An unreduced quotient num/den, kept when exact division fails."""

    num: MultiPoly
    den: MultiPoly

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    def equals(self, other: PolyFraction) -> bool:
        return self.num * other.den == other.num * self.den

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def random_poly(
    field: FieldSpec,
    nvars: int,
    max_deg_each: int = 1,
    terms: int = 2,
    seed: int | random.Random | None = None,
) -> MultiPoly:
    """Sum of ``terms`` random monomials with random coefficients.

    Coefficients may be zero and monomials may collide, so the result can
    have fewer than ``terms`` terms.
    """
    if min(nvars, max_deg_each, terms) < 0:
        raise ValueError("parameters must be non-negative")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    acc: dict[int, int] = {}
    for _ in range(terms):
        c = rng.randrange(field.q)
        exps = [rng.randint(0, max_deg_each) for _ in range(nvars)]
        k = pack(exps)
        acc[k] = field.add(acc.get(k, 0), c)
    return MultiPoly(field, nvars, acc)


# text form -------------------------------------------------------------------

def format_poly(f: MultiPoly) -> str:
    if not f._t:
        return "0"
    F = f.field
    parts = []
    for exps, c in f.iter_terms():
        factors = []
        for i, e in enumerate(exps, start=1):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        cs = F.format(c)
        if not F.is_prime_field and not re.fullmatch(r"\d+|a(\^\d+)?", cs):
            cs = f"({cs})"
        if not factors:
            parts.append(cs)
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([cs] + factors))
    return " + ".join(parts)


_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?$")


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_poly(text: str, field: FieldSpec, nvars: int | None = None) -> MultiPoly:
    """Parse ``term ('+' term)*`` with ``term := [coeff '*'] factor ('*' factor)*``.

    A bare coefficient is also a term (constants), a leading '-' negates a
    term, and extension-field coefficients go in parentheses, e.g. ``(a+1)*x1``.
    ``nvars`` defaults to the largest variable index that occurs.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial")
    s = re.sub(r"(?<=[^(+*^])-", "+-", s)
    parsed: list[tuple[int, dict[int, int]]] = []
    maxvar = 0
    for term in _split_top(s, "+"):
        if not term:
            raise ValueError(f"empty term in {text!r}")
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        code = 1
        exps: dict[int, int] = {}
        for tok in _split_top(term, "*"):
            m = _FACTOR.match(tok)
            if m:
                idx = int(m.group(1))
                if idx < 1:
                    raise ValueError(f"variable index must be >= 1 in {tok!r}")
                exps[idx] = exps.get(idx, 0) + int(m.group(2) or 1)
                maxvar = max(maxvar, idx)
            elif tok.startswith("(") or re.fullmatch(r"\d+|a(\^\d+)?", tok):
                code = field.mul(code, field.parse(tok))
            else:
                raise ValueError(f"cannot parse factor {tok!r}")
        if neg:
            code = field.neg(code)
        parsed.append((code, exps))
    n = maxvar if nvars is None else nvars
    if maxvar > n:
        raise VariableCountMismatch(f"x{maxvar} occurs but nvars = {n}")
    acc: dict[int, int] = {}
    for code, exps in parsed:
        k = pack([exps.get(i, 0) for i in range(1, n + 1)])
        acc[k] = field.add(acc.get(k, 0), code)
    return MultiPoly(field, n, acc)
