import numpy as np
import pytest
from hypothesis import given

from amou_k0 import amou, projlattice
from amou_k0.amou import Algebra
from amou_k0.errors import NotProjection, PreconditionFailed
from amou_k0.linalg import Tolerance
from amou_k0.projlattice import OrderProjection

from .conftest import algebras, levels, random_hermitian, seeds

M2 = Algebra((2,))
C_M2 = Algebra((1, 2))


def m2(x):
    return M2.from_blocks((1, 1), [np.asarray(x, dtype=complex)])


def test_projection_examples():
    assert projlattice.is_order_projection(C_M2.zeros(2))
    assert projlattice.is_order_projection(C_M2.unit(2))
    assert not projlattice.is_order_projection(0.5 * C_M2.unit(1))
    assert not projlattice.is_order_projection_by_definition(0.5 * C_M2.unit(1))


@given(seeds)
def test_spectral_projection_of_hermitian(seed):
    h = random_hermitian(np.random.default_rng(seed), 4)
    lam, u = np.linalg.eigh(h)
    q = u[:, lam > 0]
    p = M2.from_blocks((2, 2), [q @ q.conj().T])
    assert projlattice.is_order_projection(p)
    assert projlattice.is_order_projection_by_definition(p)


def test_loose_snap_accepts_scaled_projection():
    p = m2(np.diag([1, 0]))
    assert not projlattice.is_order_projection(0.7 * p)
    assert projlattice.is_order_projection(0.7 * p, Tolerance(snap=0.4))


def test_from_element_snaps():
    noisy = m2(np.diag([1 + 1e-9, 1e-9]))
    p = OrderProjection.from_element(noisy)
    assert np.array_equal(np.round(p.element.blocks[0].real, 15), np.diag([1.0, 0.0]))
    with pytest.raises(NotProjection):
        OrderProjection.from_element(0.5 * M2.unit(1))


def test_rank_vector_examples():
    assert projlattice.rank_vector(OrderProjection.unit(C_M2)) == (1, 2)
    assert projlattice.rank_vector(OrderProjection.zero(C_M2, 2)) == (0, 0)
    assert projlattice.rank_vector(m2(np.diag([1, 0]))) == (1,)


def test_equivalent_examples():
    p = OrderProjection.from_element(m2(np.diag([1, 0])))
    q = OrderProjection.from_element(m2(np.diag([0, 1])))
    w = projlattice.equivalent(p, p)
    assert w is not None and w.verify()
    w = projlattice.equivalent(p, q)
    assert w is not None and w.verify()
    assert np.allclose(np.abs(w.v.blocks[0]), [[0, 1], [0, 0]])
    assert projlattice.equivalent(p, OrderProjection.unit(M2)) is None


@given(algebras, seeds, levels, levels)
def test_witness_iff_trace_ranks_agree(alg, seed, m, n):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, m)
    q = projlattice.random_projection(alg, rng, n)
    traces = lambda x: [round(np.trace(b).real) for b in x.element.blocks]  # noqa: E731
    w = projlattice.equivalent(p, q)
    assert (w is not None) == (traces(p) == traces(q))
    if w is not None:
        assert w.verify() and projlattice.is_partial_isometry(w.v)


def test_stable_equivalence_examples(rng):
    p = projlattice.random_projection(C_M2, rng, 2)
    assert projlattice.stably_equivalent(p, p.direct_sum(OrderProjection.zero(C_M2, 3))) is not None
    d = OrderProjection.from_element(m2(np.diag([1, 0])))
    assert projlattice.stably_equivalent(d, OrderProjection.unit(M2)) is None


@given(algebras, seeds, levels)
def test_orthogonal_sum_stably_equivalent_to_direct_sum(alg, seed, n):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, n)
    q = OrderProjection(alg.unit(n) - p.element)
    assert projlattice.stably_equivalent(p + q, p.direct_sum(q)) is not None


def test_condition_T_examples():
    e12 = m2([[0, 1], [0, 0]])
    e22 = m2([[0, 0], [0, 1]])
    w = projlattice.condition_T_witness(e12, e22)
    assert w.close(e12)
    u = m2([[0, 1], [0, 0]])
    w = projlattice.condition_T_witness(u, u)
    assert amou.abs(w.adjoint()).close(amou.abs(u.adjoint()))
    assert amou.abs(w).close(amou.abs(u.adjoint()))
    with pytest.raises(PreconditionFailed):
        projlattice.condition_T_witness(e12, m2(np.diag([1, 0])))


@given(algebras, seeds, levels, levels, levels)
def test_condition_T_builds_transitivity_witness(alg, seed, a, b, c):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, 1)
    ranks = projlattice.rank_vector(p)
    q = projlattice.random_projection(alg, rng, b, ranks)
    r = projlattice.random_projection(alg, rng, c, ranks)
    pq, qr = projlattice.equivalent(p, q), projlattice.equivalent(q, r)
    w = projlattice.condition_T_witness(pq.v, qr.v.adjoint())
    assert projlattice.EquivWitness(w, p, r).verify()


def test_finiteness_examples():
    assert projlattice.is_finite(OrderProjection.unit(C_M2))
    assert projlattice.is_finite(OrderProjection.zero(C_M2))
    assert all(projlattice.is_finite(OrderProjection.unit(C_M2, n), n) for n in range(1, 5))


@given(algebras, seeds, levels, levels)
def test_swap_witness(alg, seed, m, n):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, m)
    q = projlattice.random_projection(alg, rng, n)
    w = projlattice.equivalent(p.direct_sum(q), q.direct_sum(p))
    assert w is not None and w.verify()


@given(algebras, seeds, levels)
def test_subprojections_are_dominated(alg, seed, n):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, n)
    q = projlattice.random_subprojection(p, rng)
    assert amou.leq(q.element, p.element)
