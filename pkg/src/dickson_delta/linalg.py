"""Row reduction over F_q.

Rows over F_2 are packed into Python ints (bit j = column j) and reduced
with XOR; other fields use lists of element codes and the field tables.
"""

from __future__ import annotations

from typing import Sequence

from .gf import FieldSpec

__all__ = ["rank", "nullspace", "rref_gf2", "pack_row"]


def pack_row(vec: Sequence[int]) -> int:
    out = 0
    for j, v in enumerate(vec):
        if v:
            out |= 1 << j
    return out


def rref_gf2(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed GF(2) rows: (rows, pivot columns)."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    out: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(work) if r & bit), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        work = [r ^ piv if r & bit else r for r in work]
        work = [r for r in work if r]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def _rref(rows: list[list[int]], ncols: int, F: FieldSpec) -> tuple[list[list[int]], list[int]]:
    work = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if r[col]), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        inv = F.inv(piv[col])
        piv = [F.mul(v, inv) for v in piv]

        def eliminate(r: list[int]) -> list[int]:
            c = r[col]
            if not c:
                return r
            return [F.sub(a, F.mul(c, b)) for a, b in zip(r, piv)]

        work = [r2 for r2 in (eliminate(r) for r in work) if any(r2)]
        out = [eliminate(r) for r in out]
        out.append(piv)
        pivots.append(col)
        if not work:
            break
    return out, pivots


def rank(rows: Sequence[Sequence[int]], ncols: int, F: FieldSpec) -> int:
    if F.q == 2:
        return len(rref_gf2([pack_row(r) for r in rows], ncols)[1])
    return len(_rref([list(r) for r in rows], ncols, F)[1])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, F: FieldSpec) -> list[list[int]]:
    """Basis of {v : A v = 0}, one vector per free column."""
    if F.q == 2:
        red, pivots = rref_gf2([pack_row(r) for r in rows], ncols)
        red_rows = [[(r >> j) & 1 for j in range(ncols)] for r in red]
    else:
        red_rows, pivots = _rref([list(r) for r in rows], ncols, F)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, pc in zip(red_rows, pivots):
            if r[free]:
                v[pc] = F.neg(r[free])
        basis.append(v)
    return basis
