"""The determinantal delta operator and its numerator-level iterate.

M_s(f) is the (s+1) x (s+1) matrix

    row r (r = 0..s-1):  x_1^(q^r)  ...  x_s^(q^r)   x_{r+1}^(q^m)
    last row:            L_s^(q-1)   0 ... 0          f

and delta_s(f) = det M_s(f) / L_s^(q-1).  The level m only enters through the
last column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .dickson import TruncationSpec, moore_L, truncate
from .mpoly import MultiPoly, NotDivisible, PolyFraction, PolyMatrix, coefficient_in_var, exact_div, frob_power

__all__ = [
    "DeltaResult",
    "BadVariableSupport",
    "FractionalDelta",
    "delta_matrix",
    "delta_numerator",
    "delta_denominator",
    "delta",
    "delta_iter2_numerator",
    "edge_expansion",
]


class BadVariableSupport(ValueError):
    pass


class FractionalDelta(ArithmeticError):
    pass


@dataclass(frozen=True)
class DeltaResult:
    value: Union[MultiPoly, PolyFraction]
    mode: str  # "exact" | "fractional"
    numerator: MultiPoly
    denominator: MultiPoly

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def _check(s: int, f: MultiPoly, check_support: bool = True) -> None:
    if not 1 <= s <= min(4, f.nvars):
        raise ValueError(f"need 1 <= s <= min(4, nvars), got s={s}, nvars={f.nvars}")
    if not check_support:
        return
    extra = f.support() - set(range(1, s + 1))
    if extra:
        raise BadVariableSupport(f"f involves x{min(extra)} but delta_{s} acts on x1..x{s}")


def delta_denominator(s: int, f: MultiPoly) -> MultiPoly:
    """L_s^(q-1) in the ring of f."""
    return moore_L(s, f.field, f.nvars) ** (f.field.q - 1)


def delta_matrix(s: int, m: int, f: MultiPoly, check_support: bool = True) -> PolyMatrix:
    """M_s(f).  ``check_support=False`` lets f involve variables past x_s;
    the determinant is still defined, only the operator's domain is widened."""
    _check(s, f, check_support)
    n = f.nvars
    xs = MultiPoly.gens(f.field, n)[:s]
    zero = MultiPoly.zero(f.field, n)
    rows = []
    for r in range(s):
        rows.append([frob_power(x, r) for x in xs] + [frob_power(xs[r], m)])
    rows.append([delta_denominator(s, f)] + [zero] * (s - 1) + [f])
    return PolyMatrix(rows)


def delta_numerator(s: int, m: int, f: MultiPoly, check_support: bool = True) -> MultiPoly:
    return delta_matrix(s, m, f, check_support).det()


def delta(s: int, m: int, f: MultiPoly, reduce: bool = False, check_support: bool = True) -> DeltaResult:
    """delta_s(f), exact when the division by L_s^(q-1) goes through.

    Otherwise the unreduced fraction is returned with mode "fractional".
    With ``reduce`` an exact value is truncated into Q_m(n).
    """
    num = delta_numerator(s, m, f, check_support)
    den = delta_denominator(s, f)
    try:
        value = exact_div(num, den)
    except NotDivisible:
        return DeltaResult(PolyFraction(num, den), "fractional", num, den)
    if reduce:
        value = truncate(value, TruncationSpec(f.nvars, f.field, m))
    return DeltaResult(value, "exact", num, den)


def delta_iter2_numerator(s: int, m: int, f: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """(det M_s(det M_s(f)), (L_s^(q-1))^2) with no reduction in between."""
    if s not in (2, 3):
        raise ValueError("the two-step iterate is only used for s in {2, 3}")
    inner = delta_numerator(s, m, f)
    outer = delta_numerator(s, m, inner)
    den = delta_denominator(s, f)
    return outer, den * den


def edge_expansion(m: int, h: MultiPoly, tspec: TruncationSpec) -> tuple[list[MultiPoly], MultiPoly]:
    """Split delta_4(h) by powers x_4^(q^r - 1), r = 0..m.

    Returns ([H_0, ..., H_m], remainder) with everything reduced into Q_m(4),
    so that delta_4(h) == sum_r x_4^(q^r-1) H_r + remainder there.
    """
    if tspec.n != 4:
        raise ValueError("edge expansion lives in S(4)")
    if h.nvars != 4:
        h = h.embed(4)
    res = delta(4, m, h)
    if not res.exact:
        raise FractionalDelta("delta_4(h) is not a polynomial")
    value = truncate(res.value, tspec)
    q = tspec.q
    coeffs = []
    rest = value
    for r in range(m + 1):
        e = q**r - 1
        H = coefficient_in_var(value, 4, e)
        coeffs.append(H)
        rest = rest - H * MultiPoly.var(h.field, 4, 4, e)
    return coeffs, rest
