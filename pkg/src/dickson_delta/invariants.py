"""GL_n(F_q)-fixed spaces of Q_m(n), Hilbert series, and the LRS series.

The fixed space is computed from generators only: a vector fixed by every
generator is fixed by the group.  The action preserves degree, so each
graded piece is handled on its own.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .delta import delta
from .dickson import TruncationSpec, truncate
from .gf import FieldSpec
from .linalg import nullspace, rank
from .mpoly import MultiPoly, pack, parse_poly, substitute

__all__ = [
    "GroupSpec",
    "HilbertSeries",
    "FamilySpec",
    "ResourceLimit",
    "NonPolynomialResult",
    "gl_generators",
    "gl_order",
    "closure_order",
    "act",
    "fixed_space",
    "fixed_space_dim",
    "qt_binomial",
    "lrs_series",
    "span_hilbert",
    "basis_candidate",
    "load_family",
]

Matrix = tuple[tuple[int, ...], ...]
RESOURCE_LIMIT = 2**12


class ResourceLimit(RuntimeError):
    pass


class NonPolynomialResult(ArithmeticError):
    pass


# groups ---------------------------------------------------------------------

def _det(M: Matrix, F: FieldSpec) -> int:
    """Determinant over F_q by elimination."""
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        inv = F.inv(A[c][c])
        for r in range(c + 1, n):
            if A[r][c]:
                factor = F.mul(A[r][c], inv)
                A[r] = [F.sub(a, F.mul(factor, b)) for a, b in zip(A[r], A[c])]
    return det


def _matmul(A: Matrix, B: Matrix, F: FieldSpec) -> Matrix:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class GroupSpec:
    """A matrix group given by generators; g acts by x_i -> sum_j g[i][j] x_j."""

    n: int
    field: FieldSpec
    generators: tuple[Matrix, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.n or any(len(r) != self.n for r in g):
                raise ValueError("generator has the wrong shape")
            if _det(g, self.field) == 0:
                raise ValueError("generator is singular")


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def gl_generators(n: int, spec: FieldSpec) -> GroupSpec:
    """Transvection x1 -> x1 + x2, the cyclic shift of variables, and x1 ->
    w x1 for a primitive w (q > 2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    gens: list[Matrix] = []
    if n >= 2:
        t = [r[:] for r in ident]
        t[0][1] = 1
        gens.append(tuple(map(tuple, t)))
        cyc = [[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)]
        gens.append(tuple(map(tuple, cyc)))
    if spec.q > 2:
        d = [r[:] for r in ident]
        d[0][0] = spec.primitive_element()
        gens.append(tuple(map(tuple, d)))
    if not gens:
        gens.append(tuple(map(tuple, ident)))
    return GroupSpec(n, spec, tuple(gens))


def closure_order(group: GroupSpec, limit: int = 20_000) -> int:
    """Size of the group generated, by breadth-first closure."""
    F, n = group.field, group.n
    ident: Matrix = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for A in frontier:
            for g in group.generators:
                B = _matmul(A, g, F)
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
                    if len(seen) > limit:
                        raise ResourceLimit(f"closure exceeds {limit} elements")
        frontier = nxt
    return len(seen)


def act(g: Matrix, f: MultiPoly, tspec: TruncationSpec | None = None) -> MultiPoly:
    """Substitute x_i -> sum_j g[i][j] x_j, reducing into Q_m(n) if given."""
    F, n = f.field, f.nvars
    xs = MultiPoly.gens(F, n)
    images = []
    for row in g:
        img = MultiPoly.zero(F, n)
        for c, x in zip(row, xs):
            if c:
                img = img + x.scale(F.element(c))
        images.append(img)
    return substitute(f, images, bound=tspec.bound if tspec else None)


# graded pieces ----------------------------------------------------------------

def _monomials_by_degree(tspec: TruncationSpec) -> dict[int, list[tuple[int, ...]]]:
    out: dict[int, list[tuple[int, ...]]] = {}
    for e in itertools.product(range(tspec.bound), repeat=tspec.n):
        out.setdefault(sum(e), []).append(e)
    return out


def fixed_space(group: GroupSpec, tspec: TruncationSpec) -> dict[int, list[MultiPoly]]:
    """Homogeneous basis of the fixed classes, by degree."""
    if group.n != tspec.n or group.field != tspec.field:
        raise ValueError("group and truncation disagree on (n, q)")
    if tspec.dim > RESOURCE_LIMIT:
        raise ResourceLimit(f"q^(mn) = {tspec.dim} exceeds {RESOURCE_LIMIT}")
    F, n = tspec.field, tspec.n
    basis: dict[int, list[MultiPoly]] = {}
    for d, monos in _monomials_by_degree(tspec).items():
        index = {pack(e): i for i, e in enumerate(monos)}
        rows: list[list[int]] = []
        for g in group.generators:
            # Column b holds the coordinates of g.b; stack (g - id) row-wise.
            cols = []
            for e in monos:
                img = act(g, MultiPoly.from_codes(F, n, {e: 1}), tspec)
                col = [0] * len(monos)
                for k, c in img._t.items():
                    col[index[k]] = c
                cols.append(col)
            for i in range(len(monos)):
                row = [cols[j][i] for j in range(len(monos))]
                row[i] = F.sub(row[i], 1)
                rows.append(row)
        vecs = nullspace(rows, len(monos), F)
        if vecs:
            basis[d] = [
                MultiPoly.from_codes(F, n, {monos[j]: c for j, c in enumerate(v) if c}) for v in vecs
            ]
    return basis


def fixed_space_dim(group: GroupSpec, tspec: TruncationSpec) -> int:
    return sum(len(v) for v in fixed_space(group, tspec).values())


# Hilbert series -------------------------------------------------------------

@dataclass(frozen=True)
class HilbertSeries:
    coefficients: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def from_list(cls, coeffs: Sequence[int]) -> HilbertSeries:
        return cls({d: c for d, c in enumerate(coeffs) if c})

    def __post_init__(self):
        clean = {int(d): int(c) for d, c in self.coefficients.items() if c}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    def __getitem__(self, d: int) -> int:
        return self.coefficients.get(d, 0)

    def __add__(self, other: HilbertSeries) -> HilbertSeries:
        out = dict(self.coefficients)
        for d, c in other.coefficients.items():
            out[d] = out.get(d, 0) + c
        return HilbertSeries(out)

    def shift(self, k: int) -> HilbertSeries:
        return HilbertSeries({d + k: c for d, c in self.coefficients.items()})

    def at_one(self) -> int:
        return sum(self.coefficients.values())

    def dominated_by(self, other: HilbertSeries) -> bool:
        return all(c <= other[d] for d, c in self.coefficients.items())

    def excess_over(self, other: HilbertSeries) -> dict[int, int]:
        return {d: c - other[d] for d, c in self.coefficients.items() if c > other[d]}

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for d, c in self.coefficients.items():
            mono = "1" if d == 0 else ("t" if d == 1 else f"t^{d}")
            parts.append(mono if c == 1 and d else (str(c) if d == 0 else f"{c}*{mono}"))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"coefficients": {str(d): c for d, c in self.coefficients.items()}, "at_1": self.at_one()}


def _upoly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _div_one_minus(p: list[int], d: int) -> list[int]:
    """p / (1 - t^d) over Z, or NonPolynomialResult."""
    deg = len(p) - 1
    if deg < d:
        raise NonPolynomialResult(f"degree {deg} < {d}")
    quo = [0] * (deg - d + 1)
    for j in range(len(quo)):
        quo[j] = p[j] + (quo[j - d] if j >= d else 0)
    if _upoly_mul(quo, [1] + [0] * (d - 1) + [-1]) != p:
        raise NonPolynomialResult(f"(1 - t^{d}) does not divide")
    return quo


def qt_binomial(m: int, k: int, spec: FieldSpec) -> HilbertSeries:
    """prod_{i<k} (1 - t^(q^m - q^i)) / (1 - t^(q^k - q^i))."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    q = spec.q
    num = [1]
    for i in range(k):
        d = q**m - q**i
        num = _upoly_mul(num, [1] + [0] * (d - 1) + [-1])
    for i in range(k):
        num = _div_one_minus(num, q**k - q**i)
    if any(c < 0 for c in num):
        raise NonPolynomialResult("negative coefficient")
    return HilbertSeries.from_list(num)


def lrs_series(n: int, m: int, spec: FieldSpec) -> HilbertSeries:
    """sum_{k=0}^{min(n,m)} t^((n-k)(q^m - q^k)) [m choose k]_{q,t}."""
    q = spec.q
    total = HilbertSeries()
    for k in range(min(n, m) + 1):
        total = total + qt_binomial(m, k, spec).shift((n - k) * (q**m - q**k))
    return total


def span_hilbert(polys: Iterable[MultiPoly], tspec: TruncationSpec) -> HilbertSeries:
    """Per-degree rank of the degree-d components of ``polys``."""
    F = tspec.field
    by_degree: dict[int, list[dict[int, int]]] = {}
    for f in polys:
        for d, part in truncate(f, tspec).homogeneous_components().items():
            by_degree.setdefault(d, []).append(part._t)
    out = {}
    for d, parts in by_degree.items():
        keys = sorted({k for t in parts for k in t})
        col = {k: j for j, k in enumerate(keys)}
        rows = []
        for t in parts:
            row = [0] * len(keys)
            for k, c in t.items():
                row[col[k]] = c
            rows.append(row)
        out[d] = rank(rows, len(keys), F)
    return HilbertSeries(out)


# basis candidates -------------------------------------------------------------

@dataclass(frozen=True)
class FamilyEntry:
    s: int
    polys: tuple[MultiPoly, ...]


@dataclass(frozen=True)
class FamilySpec:
    entries: tuple[FamilyEntry, ...] = ()

    def __post_init__(self):
        for e in self.entries:
            if not 0 <= e.s <= 3:
                raise ValueError("family entries need 0 <= s <= 3")
            for f in e.polys:
                if f.support() - set(range(1, e.s + 1)):
                    raise ValueError(f"{f} uses variables outside x1..x{e.s}")


def load_family(source: str | Path | Mapping, spec: FieldSpec) -> FamilySpec:
    """Read ``{"entries": [{"s": 1, "polys": ["x1^3", ...]}, ...]}``."""
    if isinstance(source, Mapping):
        data = source
    else:
        data = json.loads(Path(source).read_text())
    entries = []
    for ent in data.get("entries", []):
        polys = tuple(parse_poly(p, spec, 4) for p in ent.get("polys", []))
        entries.append(FamilyEntry(int(ent["s"]), polys))
    return FamilySpec(tuple(entries))


def basis_candidate(family: FamilySpec, tspec: TruncationSpec) -> list[MultiPoly]:
    """Reduced delta_{4-s}(f) for every f of every entry, in file order."""
    from .delta import FractionalDelta

    if tspec.n != 4:
        raise ValueError("basis candidates live in Q_m(4)")
    out = []
    for ent in family.entries:
        for f in ent.polys:
            res = delta(4 - ent.s, tspec.m, f.embed(4), check_support=False)
            if not res.exact:
                raise FractionalDelta(f"delta_{4 - ent.s}({f}) is not a polynomial")
            out.append(truncate(res.value, tspec))
    return out
