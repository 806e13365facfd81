import itertools
import json

import pytest

from dickson_delta.delta import FractionalDelta
from dickson_delta.dickson import TruncationSpec, truncate
from dickson_delta.gf import field_new
from dickson_delta.invariants import (
    FamilySpec,
    GroupSpec,
    HilbertSeries,
    ResourceLimit,
    act,
    basis_candidate,
    closure_order,
    fixed_space,
    fixed_space_dim,
    gl_generators,
    gl_order,
    load_family,
    lrs_series,
    qt_binomial,
    span_hilbert,
)
from dickson_delta.linalg import nullspace, rank, rref_gf2, pack_row
from dickson_delta.mpoly import MultiPoly, parse_poly


def gaussian_binomial(m, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def lrs_at_one(n, m, q):
    return sum(gaussian_binomial(m, k, q) for k in range(min(n, m) + 1))


def brute_fixed_count(n, q, m):
    """Count fixed vectors of Q_m(n) under the whole group, by enumeration."""
    F = field_new(q)
    T = TruncationSpec(n, F, m)
    G = gl_generators(n, F)
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    group, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for A in frontier:
            for g in G.generators:
                B = tuple(
                    tuple(sum(A[i][k] * g[k][j] for k in range(n)) % q for j in range(n)) for i in range(n)
                )
                if B not in group:
                    group.add(B)
                    nxt.append(B)
        frontier = nxt
    monos = list(itertools.product(range(T.bound), repeat=n))
    images = {}
    for g in group:
        for e in monos:
            images[g, e] = act(g, MultiPoly.from_codes(F, n, {e: 1}), T)
    count = 0
    for coeffs in itertools.product(range(q), repeat=len(monos)):
        f = MultiPoly.from_codes(F, n, {e: c for e, c in zip(monos, coeffs) if c})
        fixed = True
        for g in group:
            img = MultiPoly.zero(F, n)
            for e, c in zip(monos, coeffs):
                if c:
                    img = img + images[g, e] * c
            if img != f:
                fixed = False
                break
        count += fixed
    return count


@pytest.mark.parametrize("n,q,m,dim", [(1, 2, 1, 2), (2, 2, 1, 2), (1, 3, 1, 2)])
def test_fixed_dimension_against_full_group_enumeration(n, q, m, dim):
    assert brute_fixed_count(n, q, m) == q**dim
    assert fixed_space_dim(gl_generators(n, field_new(q)), TruncationSpec(n, field_new(q), m)) == dim


def test_fixed_basis_for_rank_two():
    F = field_new(2)
    basis = fixed_space(gl_generators(2, F), TruncationSpec(2, F, 1))
    assert {str(p) for v in basis.values() for p in v} == {"1", "x1*x2"}


@pytest.mark.parametrize("n,q,m", [(1, 2, 1), (1, 2, 2), (2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1), (4, 2, 1), (4, 2, 2)])
def test_fixed_dimension_matches_lrs(n, q, m):
    F = field_new(q)
    d = fixed_space_dim(gl_generators(n, F), TruncationSpec(n, F, m))
    assert d == lrs_series(n, m, F).at_one() == lrs_at_one(n, m, q)


def test_fixed_space_graded_series_matches_lrs():
    F = field_new(2)
    T = TruncationSpec(2, F, 2)
    basis = fixed_space(gl_generators(2, F), T)
    series = HilbertSeries({d: len(v) for d, v in basis.items()})
    assert series == lrs_series(2, 2, F)
    polys = [p for v in basis.values() for p in v]
    assert span_hilbert(polys, T) == series


def test_fixed_basis_is_fixed():
    F = field_new(3)
    T = TruncationSpec(2, F, 1)
    G = gl_generators(2, F)
    for polys in fixed_space(G, T).values():
        for p in polys:
            for g in G.generators:
                assert act(g, p, T) == p


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_generators_generate_gl(n, q):
    assert closure_order(gl_generators(n, field_new(q))) == gl_order(n, q)


def test_gl4_order_by_formula():
    assert gl_order(4, 2) == 20160


def test_singular_generator_rejected():
    F = field_new(2)
    with pytest.raises(ValueError):
        GroupSpec(2, F, (((1, 1), (1, 1)),))


def test_resource_guard():
    F = field_new(3)
    with pytest.raises(ResourceLimit):
        fixed_space_dim(gl_generators(4, F), TruncationSpec(4, F, 2))


def test_qt_binomial_edges():
    F = field_new(2)
    assert qt_binomial(3, 0, F) == HilbertSeries({0: 1})
    assert qt_binomial(3, 3, F) == HilbertSeries({0: 1})
    assert qt_binomial(1, 1, F) == HilbertSeries({0: 1})
    with pytest.raises(ValueError):
        qt_binomial(1, 2, F)


@pytest.mark.parametrize("q", [2, 3])
def test_qt_binomial_at_one_is_gaussian(q):
    F = field_new(q)
    for m in range(1, 4):
        for k in range(m + 1):
            assert qt_binomial(m, k, F).at_one() == gaussian_binomial(m, k, q)


def test_lrs_small_cases():
    F = field_new(2)
    assert lrs_series(1, 1, F) == HilbertSeries({0: 1, 1: 1})
    # GL_1(F_2) is trivial, so all of Q_m(1) is fixed: 2^m, not 2, for m > 1.
    for m in range(1, 5):
        assert lrs_series(1, m, F).at_one() == 2**m
    F3 = field_new(3)
    for m in range(1, 4):
        # x^a is fixed by -1 iff a is even
        assert lrs_series(1, m, F3).at_one() == (3**m + 1) // 2


def test_span_hilbert_basics():
    F = field_new(2)
    T = TruncationSpec(2, F, 1)
    assert span_hilbert([], T) == HilbertSeries()
    one, x1 = MultiPoly.constant(F, 2, 1), MultiPoly.var(F, 2, 1)
    assert span_hilbert([one, x1, x1], T) == HilbertSeries({0: 1, 1: 1})


def test_hilbert_series_algebra():
    a = HilbertSeries({0: 1, 2: 3})
    b = HilbertSeries.from_list([1, 0, 4])
    assert a.dominated_by(b) and not b.dominated_by(a)
    assert b.excess_over(a) == {2: 1}
    assert (a + b).at_one() == 9
    assert a.shift(2) == HilbertSeries({2: 1, 4: 3})
    assert json.loads(json.dumps(a.to_json()))["at_1"] == 4


def test_basis_candidate_and_family_file(tmp_path):
    F = field_new(2)
    T = TruncationSpec(4, F, 1)
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"entries": [{"s": 0, "polys": ["1"]}, {"s": 1, "polys": ["x1", "1"]}]}))
    fam = load_family(path, F)
    out = basis_candidate(fam, T)
    assert len(out) == 3
    assert all(truncate(p, T) == p for p in out)
    assert basis_candidate(FamilySpec(), T) == []
    assert span_hilbert(out, T).at_one() <= len(out)


def test_family_support_checked():
    F = field_new(2)
    with pytest.raises(ValueError):
        load_family({"entries": [{"s": 1, "polys": ["x2"]}]}, F)


def test_basis_candidate_fractional():
    F = field_new(3)
    fam = load_family({"entries": [{"s": 0, "polys": ["1"]}]}, F)
    with pytest.raises(FractionalDelta):
        basis_candidate(fam, TruncationSpec(4, F, 1))


def test_linalg_over_gf2_and_gf3():
    F2, F3 = field_new(2), field_new(3)
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert rank(rows, 3, F2) == 2
    assert rank(rows, 3, F3) == 3
    for v in nullspace(rows, 3, F2):
        assert all(sum(a * b for a, b in zip(r, v)) % 2 == 0 for r in rows)
    assert nullspace(rows, 3, F3) == []
    packed, piv = rref_gf2([pack_row(r) for r in rows], 3)
    assert len(packed) == len(piv) == 2


def test_nullspace_over_gf4():
    F = field_new(2, 2)
    rows = [[1, 2, 3]]
    for v in nullspace(rows, 3, F):
        acc = 0
        for a, b in zip(rows[0], v):
            acc = F.add(acc, F.mul(a, b))
        assert acc == 0
    assert len(nullspace(rows, 3, F)) == 2
