from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bihom.errors import DegreeMismatch, DimensionMismatch, ParityError, SingularMap
from bihom.gradecore import (
    Audit,
    GradedMap,
    Report,
    SuperProduct,
    SuperSpace,
    compose,
    direct_sum_map,
    direct_sum_space,
    dual_map,
    eval_product,
    invert,
    is_invertible,
    koszul_sign,
    multiply,
    qarray,
    scalar,
    suspend_space,
)
from helpers import K3_TABLE, alpha_k3, vec

V12 = SuperSpace(1, 2)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@pytest.mark.parametrize("p,q,expected", [(0, 0, 1), (1, 1, -1), (0, 1, 1), (1, 0, 1)])
def test_koszul_sign(p, q, expected):
    assert koszul_sign(p, q) == expected


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar(0.5)
    assert scalar("3/6") == Fr(1, 2)


def test_space_parities_even_first():
    assert list(V12.parities) == [0, 1, 1]
    assert V12.dim == 3


def test_direct_sum_space_keeps_summand_layout():
    S = direct_sum_space(SuperSpace(1, 2), SuperSpace(2, 1))
    assert (S.even_dim, S.odd_dim) == (3, 3)
    assert list(S.parities) == [0, 1, 1, 0, 0, 1]
    assert S.offsets() == [0, 3]


def test_eval_product_zero_product():
    P = SuperProduct.on(V12)
    assert list(eval_product(P, vec(1, 2, 3), vec(4, 5, 6))) == [0, 0, 0]


def test_eval_product_k3_e_times_x():
    P = SuperProduct.on(V12, K3_TABLE)
    assert list(eval_product(P, vec(1, 0, 0), vec(0, 1, 0))) == [0, Fr(1, 2), 0]


def test_eval_product_single_constant():
    P = SuperProduct.on(SuperSpace(2, 0), [(0, 0, 1, "2")])
    assert list(eval_product(P, vec(1, 0), vec(1, 0))) == [0, 2]


def test_eval_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        eval_product(SuperProduct.on(V12), vec(1, 0), vec(1, 0, 0))


def test_product_rejects_odd_constant():
    with pytest.raises(ParityError):
        SuperProduct.on(V12, {(0, 1, 0): 1})


def test_product_drops_zero_constants():
    P = SuperProduct.on(V12, {(0, 0, 0): 0, (0, 1, 1): 1})
    assert len(P) == 1


@given(st.lists(rationals, min_size=3, max_size=3), st.lists(rationals, min_size=3, max_size=3),
       st.lists(rationals, min_size=3, max_size=3), rationals)
@settings(max_examples=40, deadline=None)
def test_eval_product_bilinear(u, w, v, c):
    P = SuperProduct.on(V12, K3_TABLE)
    u, w, v = (np.array(a, dtype=object) for a in (u, w, v))
    lhs = eval_product(P, u * c + w, v)
    rhs = eval_product(P, u, v) * c + eval_product(P, w, v)
    assert list(lhs) == list(rhs)
    assert list(eval_product(P, v, u * c + w)) == list(eval_product(P, v, u) * c + eval_product(P, v, w))


def test_multiply_matches_eval_product():
    P = SuperProduct.on(V12, K3_TABLE)
    U = qarray([[1, 2, 0], [0, 1, -1]])
    W = qarray([[3, 0, 1]])
    out = multiply(P, U, W)
    assert out.shape == (2, 1, 3)
    for a in range(2):
        assert list(out[a, 0]) == list(eval_product(P, U[a], W[0]))


def test_compose_identity():
    f = alpha_k3(5)
    assert compose(GradedMap.identity(V12), f) == f


def test_compose_twists_multiply():
    assert compose(alpha_k3(2), alpha_k3(Fr(3, 7))) == alpha_k3(Fr(6, 7))


def test_compose_suspension_with_desuspension():
    V = SuperSpace(1, 1)
    sV, s = suspend_space(V)
    back = compose(invert(s), s)
    assert back.degree == 0 and back == GradedMap.identity(V)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compose(GradedMap.identity(SuperSpace(2, 0)), GradedMap.identity(V12))


def test_graded_map_rejects_inhomogeneous():
    with pytest.raises(ParityError):
        GradedMap(V12, V12, 0, qarray([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))


def test_invert_identity_and_twist():
    assert invert(GradedMap.identity(V12)) == GradedMap.identity(V12)
    inv = invert(alpha_k3(Fr(2, 3)))
    assert [inv.matrix[i, i] for i in range(3)] == [1, Fr(3, 2), Fr(2, 3)]


def test_invert_zero_is_singular():
    with pytest.raises(SingularMap):
        invert(GradedMap.zero(V12, V12))
    assert not is_invertible(GradedMap.zero(V12, V12))


def test_invert_odd_map():
    sV, s = suspend_space(SuperSpace(2, 2))
    t = invert(s)
    assert t.degree == 1 and compose(s, t) == GradedMap.identity(sV)


@st.composite
def even_maps(draw, space=V12):
    n0 = space.even_dim
    m = np.zeros((space.dim, space.dim), dtype=object)
    for r in range(space.dim):
        for c in range(space.dim):
            if (r < n0) == (c < n0):
                m[r, c] = Fr(draw(rationals))
            else:
                m[r, c] = Fr(0)
    return GradedMap(space, space, 0, m)


@given(even_maps())
@settings(max_examples=40, deadline=None)
def test_invert_roundtrip(f):
    if is_invertible(f):
        assert compose(f, invert(f)) == GradedMap.identity(V12)
        assert compose(invert(f), f) == GradedMap.identity(V12)


@given(even_maps(), even_maps())
@settings(max_examples=30, deadline=None)
def test_dual_reverses_composition(f, g):
    assert dual_map(compose(g, f)) == compose(dual_map(f), dual_map(g))


def test_dual_examples():
    assert dual_map(GradedMap.identity(V12)) == GradedMap.identity(V12)
    assert dual_map(alpha_k3(3)) == alpha_k3(3)
    sV, s = suspend_space(V12)
    assert dual_map(dual_map(s)) == s


def test_suspend_space_examples():
    sV, s = suspend_space(SuperSpace(2, 0))
    assert (sV.even_dim, sV.odd_dim) == (0, 2) and s.degree == 1
    sV, s = suspend_space(V12)
    assert (sV.even_dim, sV.odd_dim) == (2, 1)
    ssV, t = suspend_space(sV)
    st2 = compose(t, s)
    assert st2.degree == 0 and np.array_equal(st2.matrix, np.eye(3, dtype=int))


def test_suspend_sum_is_blockwise():
    S = direct_sum_space(V12, SuperSpace(2, 1))
    sS, s = suspend_space(S)
    assert sS.blocks == (SuperSpace(2, 1), SuperSpace(1, 2))
    assert list(sS.parities) == [0, 0, 1, 0, 1, 1]


def test_direct_sum_map_examples():
    idsum = direct_sum_map(GradedMap.identity(V12), GradedMap.identity(V12))
    assert idsum == GradedMap.identity(direct_sum_space(V12, V12))
    blk = direct_sum_map(alpha_k3(2), alpha_k3(3)).matrix
    assert blk[1, 1] == 2 and blk[4, 4] == 3 and blk[0, 3] == 0


def test_direct_sum_map_degree_mismatch():
    _, s = suspend_space(V12)
    with pytest.raises(DegreeMismatch):
        direct_sum_map(GradedMap.identity(V12), s)


def test_report_and_audit():
    res = np.zeros((2, 2, 3), dtype=object)
    res[1, 0, 2] = Fr(1, 2)
    r = Report.from_residuals("demo", res)
    assert not r.passed and r.tuples() == [(1, 0)]
    assert r.violations[0][1] == (0, 0, Fr(1, 2))
    a = Audit("x", (Report("ok"),), (r,))
    assert a.passed and a["demo"] is r and a.violation_count == 0
