import numpy as np
import pytest
from hypothesis import given

from amou_k0 import amou
from amou_k0.amou import AElement, Algebra
from amou_k0.errors import AlgebraMismatch, NotHermitian, NotPositive, ShapeMismatch, ZeroElement
from amou_k0.linalg import Tolerance

from .conftest import algebras, levels, seeds

M2 = Algebra((2,))
C_M2 = Algebra((1, 2))


def m2(x):
    return M2.from_blocks((1, 1), [np.asarray(x, dtype=complex)])


def test_algebra_validation():
    with pytest.raises(ValueError):
        Algebra(())
    with pytest.raises(ValueError):
        Algebra((2, 0))
    assert str(C_M2) == "C+M2"


def test_block_shapes_follow_level():
    v = C_M2.zeros(2, 3)
    assert [b.shape for b in v.blocks] == [(2, 3), (4, 6)]
    with pytest.raises(ShapeMismatch):
        AElement(M2, (1, 1), (np.zeros((3, 3)),))


def test_elements_are_immutable():
    v = M2.unit(1)
    with pytest.raises(ValueError):
        v.blocks[0][0, 0] = 5


def test_unit_positivity():
    assert amou.is_positive(M2.unit(3))
    assert not amou.is_positive(-M2.unit(3))
    assert not amou.is_positive(m2(np.diag([1, -0.5])))


def test_is_positive_needs_square_level():
    with pytest.raises(ShapeMismatch):
        amou.is_positive(M2.zeros(1, 2))


def test_abs_examples():
    e = C_M2.unit(2)
    assert amou.abs(e).close(e)
    assert amou.abs(m2([[0, 1], [0, 0]])).close(m2(np.diag([0, 1])))


@given(algebras, seeds, levels, levels)
def test_abs_direct_sum(alg, seed, m, n):
    rng = np.random.default_rng(seed)
    v, w = alg.random(rng, m, n), alg.random(rng, n, m)
    assert amou.abs(v.direct_sum(w)).close(amou.abs(v).direct_sum(amou.abs(w)))


@given(algebras, seeds, levels, levels)
def test_abs_matches_numpy_oracle(alg, seed, m, n):
    v = alg.random(np.random.default_rng(seed), m, n)
    for ours, b in zip(amou.abs(v).blocks, v.blocks):
        _, s, vh = np.linalg.svd(b)
        oracle = vh.conj().T[:, : len(s)] @ np.diag(s) @ vh[: len(s)]
        assert np.allclose(ours, oracle, atol=1e-9)


def test_scalar_act_examples(rng):
    v = C_M2.random(rng, 2, 3)
    assert amou.scalar_act(np.eye(2), v, np.eye(3)).close(v)
    assert amou.scalar_act(np.zeros((1, 2)), v, np.eye(3)).is_zero()
    with pytest.raises(ShapeMismatch):
        amou.scalar_act(np.eye(3), v, np.eye(3))


@given(algebras, seeds, levels, levels)
def test_isometry_preserves_abs(alg, seed, m, n):
    rng = np.random.default_rng(seed)
    v = alg.random(rng, m, n)
    iso = amou.random_isometry(rng, m + 2, m)
    assert amou.abs(amou.scalar_act(iso, v, np.eye(n))).close(amou.abs(v))


def test_norm_examples():
    assert amou.norm(C_M2.unit(3)) == pytest.approx(1.0)
    assert amou.norm(C_M2.zeros(2)) == 0.0
    assert amou.norm(m2(np.diag([2, -5]))) == pytest.approx(5.0)


@given(algebras, seeds, levels)
def test_norm_inf_formula_agrees(alg, seed, n):
    v = alg.random(np.random.default_rng(seed), n)
    assert amou.norm_inf_formula(v) == pytest.approx(amou.norm(v), abs=1e-7)


def test_orthogonal_examples():
    assert amou.orthogonal(m2(np.diag([1, 0])), m2(np.diag([0, 1])))
    assert not amou.orthogonal(M2.unit(1), M2.unit(1))
    with pytest.raises(NotPositive):
        amou.orthogonal(-M2.unit(1), M2.unit(1))


@given(algebras, seeds, levels)
def test_projection_orthogonal_to_complement(alg, seed, n):
    from amou_k0.projlattice import random_projection

    p = random_projection(alg, np.random.default_rng(seed), n).element
    assert amou.orthogonal(p, alg.unit(n) - p)


def test_orthogonal_infty_examples():
    assert amou.orthogonal_infty(m2(np.diag([1, 0])), m2(np.diag([0, 1])))
    assert not amou.orthogonal_infty(M2.unit(1), M2.unit(1))
    assert not amou.orthogonal_infty(m2(np.diag([1, 0.5])), m2(np.diag([0, 1])))
    with pytest.raises(ZeroElement):
        amou.orthogonal_infty(M2.zeros(1), M2.unit(1))


def test_plain_infty_orthogonality_is_weaker_than_orthogonality():
    m3 = Algebra((3,))
    u = m3.from_blocks((1, 1), [np.diag([1, 0, 0.1])])
    v = m3.from_blocks((1, 1), [np.diag([0, 1, 0.1])])
    assert amou.orthogonal_infty(u, v)
    assert not amou.orthogonal(u, v)
    assert not amou.orthogonal_infty_hereditary(u, v)


@given(algebras, seeds, levels)
def test_orthogonal_iff_hereditary_infty(alg, seed, n):
    rng = np.random.default_rng(seed)
    u, v = (alg.random_positive(rng, n, rank_deficient=True) for _ in range(2))
    if amou.norm(u) < 1e-9 or amou.norm(v) < 1e-9:
        return
    assert amou.orthogonal(u, v) == amou.orthogonal_infty_hereditary(u, v, rng, 10)
    assert amou.orthogonal(u, v) == amou.orthogonal_product(u, v)


@given(algebras, seeds, levels)
def test_orthogonal_pairs_are_infty_orthogonal(alg, seed, n):
    u, v = amou.random_orthogonal_pair(alg, np.random.default_rng(seed), n)
    if amou.norm(u) == 0 or amou.norm(v) == 0:
        return
    assert amou.orthogonal(u, v)
    assert amou.orthogonal_infty(u, v)
    assert amou.orthogonal_infty_definition(u, v)


def test_decompose_examples():
    p = m2([[2, 1], [1, 2]])
    plus, minus = amou.orthogonal_decompose(p)
    assert plus.close(p) and minus.is_zero()
    plus, minus = amou.orthogonal_decompose(m2(np.diag([3, -2])))
    assert plus.close(m2(np.diag([3, 0]))) and minus.close(m2(np.diag([0, 2])))
    plus, minus = amou.orthogonal_decompose(m2([[0, 1], [1, 0]]))
    assert plus.close(m2(0.5 * np.array([[1, 1], [1, 1]])))
    assert minus.close(m2(0.5 * np.array([[1, -1], [-1, 1]])))
    with pytest.raises(NotHermitian):
        amou.orthogonal_decompose(m2([[0, 1], [0, 0]]))


@given(algebras, seeds, levels)
def test_decompose_reconstructs(alg, seed, n):
    h = alg.random(np.random.default_rng(seed), n, hermitian=True)
    plus, minus = amou.orthogonal_decompose(h)
    assert (plus - minus).close(h)
    assert (plus + minus).close(amou.abs(h))
    assert amou.orthogonal(plus, minus)


def test_check_axioms_m2():
    rep = amou.check_axioms(M2, 100, 0, Tolerance(1e-7))
    assert rep.ok, rep.render()
    assert len(rep.checks) == 12


def test_check_axioms_needs_trials():
    with pytest.raises(ValueError):
        amou.check_axioms(M2, 0, 0)


def test_contraction_at_identity_reduces(rng):
    v = C_M2.random(rng, 2, 3)
    beta = rng.standard_normal((3, 2))
    lhs = amou.abs(amou.scalar_act(np.eye(2), v, beta))
    rhs = amou.abs(amou.scalar_act(np.eye(3), amou.abs(v), beta))
    assert amou.leq(lhs, rhs, Tolerance(1e-7))


def test_direct_sum_exact_on_diagonal_data():
    v = m2(np.diag([2, -3]))
    w = m2(np.diag([-1, 4]))
    got = amou.abs(v.direct_sum(w))
    assert np.allclose(got.blocks[0], np.diag([2, 3, 1, 4]), atol=1e-14)


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        M2.unit(1) + C_M2.unit(1)
