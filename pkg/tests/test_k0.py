import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amou_k0 import k0, projlattice
from amou_k0.amou import Algebra
from amou_k0.errors import AlgebraMismatch
from amou_k0.k0 import K0Class, K0Element
from amou_k0.projlattice import OrderProjection

from .conftest import ALGEBRAS, algebras, seeds

C = Algebra((1,))
M2 = Algebra((2,))
C_M2 = Algebra((1, 2))


def test_class_examples(rng):
    assert k0.class_of(OrderProjection.zero(C_M2)).ranks == (0, 0)
    assert k0.class_of(OrderProjection.unit(C_M2)).ranks == (1, 2)
    p = projlattice.random_projection(C_M2, rng, 2)
    q = projlattice.random_projection(C_M2, rng, 3)
    assert k0.class_of(p.direct_sum(q)) == k0.class_of(p) + k0.class_of(q)


@pytest.mark.parametrize(
    "alg, text",
    [
        (M2, "K0 = Z, cone Z+, unit [2]"),
        (C_M2, "K0 = Z^2, cone Z+^2, unit [1,2]"),
        (C, "K0 = Z, cone Z+, unit [1]"),
    ],
)
def test_k0_of_examples(alg, text):
    g = k0.k0_of(alg)
    assert g.describe() == text
    assert g.order_unit.diff == alg.block_sizes
    assert g.finite_units and all(g.verified.values())


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_k0_of_acceptance_algebras(alg):
    g = k0.k0_of(alg)
    assert g.k == alg.k and all(g.verified.values())


def test_group_op_examples(rng):
    g = K0Element(C_M2, (3, -1))
    assert g + (-g) == K0Element.zero(C_M2)
    assert K0Element(C_M2, (1, 0)) + K0Element(C_M2, (0, 2)) == K0Element(C_M2, (1, 2))
    p = projlattice.random_projection(C_M2, rng, 2)
    q = projlattice.random_projection(C_M2, rng, 1)
    assert K0Element.from_pair(p, q) + K0Element.from_pair(q, p) == K0Element.zero(C_M2)


def test_order_unit_bound_examples():
    assert k0.order_unit_bound(K0Element.zero(C_M2)) == 0
    assert k0.order_unit_bound(K0Element(C_M2, (1, 2))) == 1
    assert k0.order_unit_bound(K0Element(C_M2, (3, -5))) == 3


vectors = st.lists(st.integers(-20, 20), min_size=2, max_size=2)


@given(vectors, vectors, vectors)
def test_group_and_order_laws(a, b, c):
    a, b, c = (K0Element(C_M2, x) for x in (a, b, c))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a + c == b + c) == (a == b)
    assert (a <= b) == (a + c <= b + c)
    n = k0.order_unit_bound(a)
    e = K0Element(C_M2, C_M2.block_sizes)
    assert -n * e <= a <= n * e
    if n:
        assert not (-(n - 1) * e <= a <= (n - 1) * e)


@given(algebras, seeds)
def test_pair_round_trip(alg, seed):
    rng = np.random.default_rng(seed)
    g = K0Element(alg, tuple(int(x) for x in rng.integers(-5, 6, size=alg.k)))
    p, q = g.pair()
    assert K0Element.from_pair(p, q) == g


@given(algebras, seeds)
def test_pair_equivalence_is_transitive(alg, seed):
    rng = np.random.default_rng(seed)
    p = projlattice.random_projection(alg, rng, 2)
    q = projlattice.random_projection(alg, rng, 1)
    r = projlattice.random_projection(alg, rng, 2)
    s = projlattice.random_projection(alg, rng, 1)
    a, b, c = (p, q), (p.direct_sum(r), q.direct_sum(r)), (p.direct_sum(r).direct_sum(s), q.direct_sum(r).direct_sum(s))
    assert k0.pairs_equivalent(a, a)
    assert k0.pairs_equivalent(a, b) and k0.pairs_equivalent(b, a)
    assert k0.pairs_equivalent(b, c) and k0.pairs_equivalent(a, c)


@given(algebras, seeds)
def test_cancellation(alg, seed):
    rng = np.random.default_rng(seed)
    p, q, r = (projlattice.random_projection(alg, rng, 2) for _ in range(3))
    lhs = k0.class_of(p) + k0.class_of(r) == k0.class_of(q) + k0.class_of(r)
    assert lhs == (k0.class_of(p) == k0.class_of(q))


def test_representative_is_canonical():
    p = K0Class(C_M2, (2, 3)).representative()
    assert p.level == 2
    assert np.array_equal(p.element.blocks[1].real, np.diag([1, 1, 1, 0]))


def test_mismatched_algebras():
    with pytest.raises(AlgebraMismatch):
        K0Element(C_M2, (1, 1)) + K0Element(Algebra((2, 3)), (1, 1))
    with pytest.raises(ValueError):
        K0Class(C_M2, (-1, 0))
