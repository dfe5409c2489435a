import numpy as np
import pytest
from hypothesis import given

from amou_k0 import amou, limitspace
from amou_k0.amou import Algebra
from amou_k0.errors import LevelTooSmall, ShapeMismatch
from amou_k0.limitspace import FMatrix, LimitElement

from .conftest import algebras, levels, seeds

C_M2 = Algebra((1, 2))


def test_padding_is_identified(rng):
    v = C_M2.random(rng, 2)
    assert limitspace.lift(v.pad(2, 2)) == limitspace.lift(v)


def test_zero_has_order_zero():
    z = limitspace.lift(C_M2.zeros(3))
    assert z.order == 0 and z == limitspace.zero(C_M2)


def test_full_last_row_keeps_order(rng):
    v = C_M2.random(rng, 3)
    assert limitspace.lift(v).order == 3


def test_lift_needs_square():
    with pytest.raises(ShapeMismatch):
        limitspace.lift(C_M2.zeros(1, 2))


def test_at_level_below_order():
    with pytest.raises(LevelTooSmall):
        limitspace.local_unit(C_M2, 3).at_level(2)


def test_fmatrix_basics():
    assert FMatrix.identity(2) @ FMatrix.identity(3) == FMatrix.identity(2)
    assert FMatrix.shift(2).order == 4
    assert FMatrix.unit(1, 3).adjoint() == FMatrix.unit(3, 1)
    with pytest.raises(ValueError):
        FMatrix({(0, 1): 1})


@given(algebras, seeds, levels)
def test_identity_action(alg, seed, n):
    v = limitspace.lift(alg.random(np.random.default_rng(seed), n))
    i = FMatrix.identity(v.order + 1)
    assert limitspace.f_act(i, v, i) == v


def test_e11_fixes_order_one(rng):
    v = limitspace.lift(C_M2.random(rng, 1))
    e = FMatrix.unit(1, 1)
    assert limitspace.f_act(e, v, e) == v


def test_shift_moves_block_down(rng):
    n = 2
    v = limitspace.lift(C_M2.random(rng, n))
    j = FMatrix.shift(n)
    moved = limitspace.f_act(j.adjoint(), v, j)
    assert moved.order == 2 * n
    expected = C_M2.zeros(n).direct_sum(v.payload)
    assert moved.payload.close(expected)


def test_abs_of_positive(rng):
    p = limitspace.lift(C_M2.random_positive(rng, 2))
    assert limitspace.abs_limit(p).close(p)


@given(algebras, seeds, levels)
def test_local_unitary_commutes_with_abs(alg, seed, n):
    rng = np.random.default_rng(seed)
    v = limitspace.lift(alg.random(rng, n))
    a = FMatrix.from_array(amou.random_unitary(rng, v.order + 1))
    lhs = limitspace.abs_limit(limitspace.f_act(a.adjoint(), v, a))
    rhs = limitspace.f_act(a.adjoint(), limitspace.abs_limit(v), a)
    assert lhs.close(rhs)


@given(algebras, seeds, levels, levels)
def test_independent_elements_add_abs(alg, seed, m, n):
    rng = np.random.default_rng(seed)
    u = limitspace.lift(alg.random(rng, m))
    v = limitspace.lift(alg.zeros(m).direct_sum(alg.random(rng, n)))
    assert limitspace.f_independent(u, v) is not None
    assert limitspace.abs_limit(u + v).close(limitspace.abs_limit(u) + limitspace.abs_limit(v))


def test_pair_plus_of_units():
    e = limitspace.local_unit(C_M2)
    assert limitspace.pair_plus(e, e, 1) == limitspace.local_unit(C_M2, 2)


def test_sa_of_zero():
    assert limitspace.sa_n(limitspace.zero(C_M2), 2) == limitspace.zero(C_M2)


@given(algebras, seeds, levels)
def test_pair_plus_and_sa_assemble_block_matrix(alg, seed, n):
    rng = np.random.default_rng(seed)
    v1 = limitspace.lift(alg.random(rng, n, hermitian=True).pad(0, 0))
    v2 = limitspace.lift(alg.random(rng, n, hermitian=True))
    v = limitspace.lift(alg.random(rng, n))
    n = max(v1.order, v2.order, v.order)
    for sign in (1, -1):
        got = limitspace.pair_plus(v1, v2, n) + sign * limitspace.sa_n(v, n)
        want = amou.block_matrix(
            [[v1.at_level(n), sign * v.at_level(n)], [sign * v.at_level(n).adjoint(), v2.at_level(n)]]
        )
        assert got.at_level(2 * n).close(want)


def test_limit_norm_examples(rng):
    assert limitspace.limit_norm(limitspace.local_unit(C_M2)) == pytest.approx(1.0, abs=1e-9)
    assert limitspace.limit_norm(limitspace.zero(C_M2)) == 0.0
    v = C_M2.random(rng, 2)
    assert limitspace.limit_norm(limitspace.lift(v.pad(3, 3))) == pytest.approx(limitspace.limit_norm(limitspace.lift(v)))


@given(algebras, seeds, levels)
def test_limit_norm_matches_operator_norm(alg, seed, n):
    v = limitspace.lift(alg.random(np.random.default_rng(seed), n))
    assert abs(limitspace.limit_norm(v) - limitspace.norm(v)) <= 1e-7


@given(algebras, seeds, levels)
def test_order_monotone_on_dominated_pairs(alg, seed, n):
    rng = np.random.default_rng(seed)
    v = limitspace.lift(alg.random_positive(rng, n).pad(1, 1))
    u = limitspace.lift(amou.random_dominated(v.payload, rng))
    assert u.order <= v.order


def test_f_independent_examples(rng):
    def at(indices):
        n = max(indices)
        a = np.zeros((n, n))
        for i in indices:
            a[i - 1, i - 1] = 1.0
        return limitspace.f_act(FMatrix.from_array(a), limitspace.local_unit(C_M2, n), FMatrix.identity(n))

    r, s = limitspace.f_independent(at([1]), at([2]))
    assert r == FMatrix.unit(1, 1) and s == FMatrix.unit(2, 2)
    v = at([1])
    assert limitspace.f_independent(v, v) is None
    r, s = limitspace.f_independent(at([1, 2]), at([3, 5]))
    assert r == FMatrix.diagonal([1, 2]) and s == FMatrix.diagonal([3, 5])


@given(algebras, seeds, levels)
def test_bimodule_norm_inequality(alg, seed, n):
    rng = np.random.default_rng(seed)
    v = limitspace.lift(alg.random(rng, n))
    a = FMatrix.from_array(rng.standard_normal((3, 3)))
    b = FMatrix.from_array(rng.standard_normal((2, 2)))
    lhs = limitspace.norm(limitspace.f_act(a, v, b))
    assert lhs <= a.norm() * limitspace.norm(v) * b.norm() * (1 + 1e-9) + 1e-12


def test_limit_equality_is_exact():
    v = LimitElement(C_M2.unit(1))
    assert v == limitspace.local_unit(C_M2)
    assert v != 2 * v
